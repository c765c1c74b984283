#include "shofa/codec_noisy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shofa/rng.hpp"

namespace shofa {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

double linf_norm(const MeasurementVector& y) {
    double m = 0.0;
    for (const auto& v : y) m = std::max(m, std::abs(v));
    return m;
}

bool ipow_ge(std::size_t b, std::size_t gamma, std::size_t n) {
    unsigned __int128 p = 1;
    for (std::size_t g = 0; g < gamma; ++g) {
        p *= b;
        if (p >= n) return true;
    }
    return p >= n;
}

// Smallest base with base^gamma >= n.
std::size_t base_for(std::size_t n, std::size_t gamma) {
    if (gamma == 1) return n;
    std::size_t b = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::pow(static_cast<double>(n), 1.0 / gamma)));
    while (b > 2 && ipow_ge(b - 1, gamma, n)) --b;
    while (!ipow_ge(b, gamma, n)) ++b;
    return b;
}

class IndexedSet {
  public:
    explicit IndexedSet(std::size_t universe) : pos_(universe, kNpos) {}
    bool empty() const { return items_.empty(); }
    void insert(std::size_t x) {
        if (pos_[x] != kNpos) return;
        pos_[x] = items_.size();
        items_.push_back(x);
    }
    void erase(std::size_t x) {
        const std::size_t p = pos_[x];
        if (p == kNpos) return;
        const std::size_t last = items_.back();
        items_[p] = last;
        pos_[last] = p;
        items_.pop_back();
        pos_[x] = kNpos;
    }
    std::size_t pick(Rng& rng) const { return items_[rng.next_index(items_.size())]; }

  private:
    std::vector<std::size_t> items_;
    std::vector<std::size_t> pos_;
};

}  // namespace

std::vector<std::uint32_t> digits(std::size_t j, std::size_t gamma, std::size_t base_size) {
    std::vector<std::uint32_t> g(gamma, 0);
    for (std::size_t t = gamma; t-- > 0;) {
        g[t] = static_cast<std::uint32_t>(j % base_size);
        j /= base_size;
    }
    if (j != 0) throw std::invalid_argument("digits: index exceeds base^gamma");
    return g;
}

std::size_t digits_to_index(const std::vector<std::uint32_t>& g, std::size_t base_size) {
    std::size_t j = 0;
    for (const std::uint32_t d : g) j = j * base_size + d;
    return j;
}

std::pair<std::uint32_t, double> quantize_phase(double angle, std::size_t base_size) {
    if (base_size < 2) throw std::invalid_argument("quantize_phase: base must be >= 2");
    const double period = 2.0 * static_cast<double>(base_size - 1);
    double a = std::fmod(angle, kPi);
    if (a < 0.0) a += kPi;
    long long r = std::llround(a * period / kPi);
    r %= static_cast<long long>(period);  // 2(|B|-1) wraps to digit 0
    std::uint32_t digit = static_cast<std::uint32_t>(r);
    if (digit > base_size - 1) digit = static_cast<std::uint32_t>(base_size - 1);
    const double step = kPi / period;
    return {digit, static_cast<double>(digit) * step};
}

NoisyEnsemble NoisyEnsemble::build(const LeftRegularGraph& graph, std::size_t gamma,
                                   std::uint64_t seed) {
    if (gamma < 1) throw std::invalid_argument("build_noisy: gamma must be >= 1");
    const std::size_t n = graph.n_left();
    // n^(1/gamma) >= 2, i.e. the digit alphabet must have at least two values.
    if (gamma >= 64 || (n >> gamma) == 0 || (static_cast<std::size_t>(1) << gamma) > n)
        throw std::invalid_argument("build_noisy: base too small (need n >= 2^gamma)");

    NoisyEnsemble ens;
    ens.graph_ = graph;
    ens.gamma_ = gamma;
    ens.base_ = base_for(n, gamma);
    ens.phase_step_ = kPi / (2.0 * static_cast<double>(ens.base_ - 1));

    const std::size_t d = graph.degree();
    const std::size_t edges = n * d;
    ens.ident_digit_.resize(edges * gamma);
    ens.verif_digit_.resize(edges * gamma);
    ens.ident_w_.resize(edges * gamma);
    ens.verif_w_.resize(edges * gamma);

    Rng rng(derive_seed(seed, 0x0153));
    for (std::size_t j = 0; j < n; ++j) {
        const auto dj = digits(j, gamma, ens.base_);
        for (std::size_t t = 0; t < d; ++t) {
            const std::size_t e = j * d + t;
            for (std::size_t g = 0; g < gamma; ++g) {
                ens.ident_digit_[e * gamma + g] = dj[g];
                ens.ident_w_[e * gamma + g] =
                    std::polar(1.0, ens.phase_step_ * static_cast<double>(dj[g]));
                const std::uint32_t v =
                    static_cast<std::uint32_t>(rng.next_index(ens.base_));
                ens.verif_digit_[e * gamma + g] = v;
                ens.verif_w_[e * gamma + g] =
                    std::polar(1.0, ens.phase_step_ * static_cast<double>(v));
            }
        }
    }
    return ens;
}

MeasurementVector encode_noisy(const NoisyEnsemble& ens, const std::vector<double>& x_plus_z,
                               const NoiseSpec& e_spec, std::uint64_t seed) {
    const auto& g = ens.graph();
    if (x_plus_z.size() != g.n_left())
        throw std::invalid_argument("encode_noisy: signal length mismatch");
    const std::size_t gamma = ens.gamma();
    MeasurementVector y(ens.rows(), {0.0, 0.0});
    for (std::size_t j = 0; j < x_plus_z.size(); ++j) {
        const double xv = x_plus_z[j];
        if (xv == 0.0) continue;
        for (std::size_t t = 0; t < g.degree(); ++t) {
            const std::size_t i = g.neighbors(j)[t];
            const std::size_t e = j * g.degree() + t;
            const std::size_t group = i * 2 * gamma;
            for (std::size_t gm = 0; gm < gamma; ++gm) {
                y[group + gm] += xv * ens.ident_weight(e, gm);
                y[group + gamma + gm] += xv * ens.verif_weight(e, gm);
            }
        }
    }
    if (e_spec.sigma_e > 0.0) {
        Rng rng(derive_seed(seed, 0xe0e0));
        for (auto& v : y)
            v += std::complex<double>(e_spec.sigma_e * rng.next_normal(),
                                      e_spec.sigma_e * rng.next_normal());
    }
    return y;
}

namespace detail {

std::optional<LeafHit> probe_leaf_noisy(const NoisyEnsemble& ens, std::size_t i,
                                        const std::complex<double>* rows, double threshold,
                                        bool average_magnitudes) {
    const auto& g = ens.graph();
    const std::size_t gamma = ens.gamma();
    const std::size_t base = ens.base_size();

    for (std::size_t r = 0; r < 2 * gamma; ++r)
        if (std::abs(rows[r]) <= threshold) return std::nullopt;

    // Sign from the first identification row's half-plane.
    const double a0 = std::arg(rows[0]);  // (-pi, pi]
    const bool positive = a0 > -kPi / 4.0 && a0 <= 3.0 * kPi / 4.0;

    std::vector<std::uint32_t> dig(gamma);
    for (std::size_t gm = 0; gm < gamma; ++gm)
        dig[gm] = quantize_phase(std::arg(rows[gm]), base).first;
    const std::size_t j = digits_to_index(dig, base);
    if (j >= g.n_left() || !g.has_edge(j, i)) return std::nullopt;
    const std::size_t e = ens.edge_index(j, i);

    for (std::size_t gm = 0; gm < gamma; ++gm) {
        const std::uint32_t vq = quantize_phase(std::arg(rows[gamma + gm]), base).first;
        if (vq != ens.verif_digit(e, gm)) return std::nullopt;
    }

    double mag;
    if (average_magnitudes) {
        mag = 0.0;
        for (std::size_t gm = 0; gm < gamma; ++gm) mag += std::abs(rows[gm]);
        mag /= static_cast<double>(gamma);
    } else {
        mag = std::abs(rows[0]);
    }
    return LeafHit{j, positive ? mag : -mag};
}

}  // namespace detail

DecodeReport decode_noisy(const NoisyEnsemble& ens, const MeasurementVector& y,
                          const TruncationPolicy& policy, std::size_t k, std::uint64_t seed,
                          std::size_t iter_cap, bool average_magnitudes) {
    if (y.size() != ens.rows())
        throw std::invalid_argument("decode_noisy: measurement size mismatch");
    if (policy.delta <= 0.0) throw std::invalid_argument("decode_noisy: delta must be positive");
    if (k == 0) {
        DecodeReport empty;
        empty.xhat.length = ens.graph().n_left();
        empty.status = DecodeStatus::Success;
        empty.residual_linf = linf_norm(y);
        return empty;
    }
    const auto& g = ens.graph();
    const std::size_t n = g.n_left();
    const std::size_t m_prime = g.n_right();
    const std::size_t gamma = ens.gamma();
    const double threshold = policy.delta / static_cast<double>(k);
    if (iter_cap == 0) iter_cap = 4 * k;

    MeasurementVector res = y;
    auto group_rows = [&](std::size_t i) { return res.data() + i * 2 * gamma; };
    auto above_threshold = [&](std::size_t i) {
        const std::complex<double>* rows = group_rows(i);
        for (std::size_t r = 0; r < 2 * gamma; ++r)
            if (std::abs(rows[r]) <= threshold) return false;
        return true;
    };

    Rng rng(derive_seed(seed, 0xd01f));
    IndexedSet neighborly(m_prime);
    for (std::size_t i = 0; i < m_prime; ++i)
        if (above_threshold(i)) neighborly.insert(i);

    DecodeReport report;
    std::vector<double> xhat(n, 0.0);
    std::vector<char> assigned(n, 0);
    std::uint64_t ops = 2 * gamma * m_prime;

    std::size_t passes = 0;
    while (!neighborly.empty() && passes < iter_cap) {
        ++passes;
        const std::size_t i = neighborly.pick(rng);
        ops += 4 * gamma;
        const auto hit =
            detail::probe_leaf_noisy(ens, i, group_rows(i), threshold, average_magnitudes);
        if (!hit) continue;  // verification failed; the node stays for later

        const std::size_t j = hit->j;
        assigned[j] = 1;
        xhat[j] = hit->value;

        for (std::size_t t = 0; t < g.degree(); ++t) {
            const std::size_t p = g.neighbors(j)[t];
            const std::size_t e = j * g.degree() + t;
            std::complex<double>* rows = group_rows(p);
            for (std::size_t gm = 0; gm < gamma; ++gm) {
                rows[gm] -= hit->value * ens.ident_weight(e, gm);
                rows[gamma + gm] -= hit->value * ens.verif_weight(e, gm);
            }
            ops += 4 * gamma;
            if (above_threshold(p))
                neighborly.insert(p);
            else
                neighborly.erase(p);
        }
    }

    report.iterations = passes;
    report.counted_ops = ops;
    report.residual_linf = linf_norm(res);
    report.status = neighborly.empty() ? DecodeStatus::Success : DecodeStatus::IterationCap;
    report.xhat.length = n;
    for (std::size_t j = 0; j < n; ++j)
        if (assigned[j] && xhat[j] != 0.0) report.xhat.entries.emplace_back(j, xhat[j]);
    return report;
}

std::pair<double, double> phase_noise_bound(double delta, double k, double n, double c, double d,
                                            double sigma_z, double sigma_e, double alpha) {
    if (delta <= 0.0) throw std::invalid_argument("phase_noise_bound: delta must be positive");
    const double var = d * n * sigma_z * sigma_z / (c * k) + sigma_e * sigma_e;
    const double expected = std::sqrt(2.0 * kPi * k * k * var / (delta * delta));
    const double tail = 0.5 * std::exp(-alpha * alpha / (2.0 * kPi));
    return {expected, tail};
}

double default_delta(std::size_t k, std::size_t n, double c, std::size_t d, double sigma_z,
                     double sigma_e) {
    const double kk = static_cast<double>(k);
    const double var = static_cast<double>(d) * static_cast<double>(n) / (c * kk) * sigma_z *
                           sigma_z +
                       sigma_e * sigma_e;
    return 10.0 * kk * std::sqrt(var);
}

std::size_t default_gamma(std::size_t n, std::size_t k, double c, std::size_t d, double sigma_z,
                          double sigma_e, double delta) {
    std::size_t gamma_max = 1;
    while (gamma_max + 1 < 64 && (static_cast<std::size_t>(1) << (gamma_max + 1)) <= n)
        ++gamma_max;
    if (k == 0 || (sigma_z == 0.0 && sigma_e == 0.0)) return 1;
    const double bound = phase_noise_bound(delta, static_cast<double>(k), static_cast<double>(n),
                                           c, static_cast<double>(d), sigma_z, sigma_e, 1.0)
                             .first;
    for (std::size_t gamma = 1; gamma <= gamma_max; ++gamma) {
        const std::size_t base = base_for(n, gamma);
        const double margin = kPi / (4.0 * static_cast<double>(base - 1));
        if (margin >= bound) return gamma;
    }
    return gamma_max;
}

}  // namespace shofa
