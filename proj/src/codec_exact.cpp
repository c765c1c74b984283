#include "shofa/codec_exact.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
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

// Residual-set with O(1) membership, removal, and uniform random pick.
class IndexedSet {
  public:
    explicit IndexedSet(std::size_t universe) : pos_(universe, kNpos) {}

    bool contains(std::size_t x) const { return pos_[x] != kNpos; }
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }

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

ExactEnsemble ExactEnsemble::build(const LeftRegularGraph& graph, MatrixMode mode,
                                   std::uint64_t seed, std::uint64_t grid_levels) {
    const std::size_t n = graph.n_left();
    const std::size_t d = graph.degree();
    std::uint64_t v = grid_levels;
    if (v == 0) {
        if (mode == MatrixMode::Split) {
            const double cube = static_cast<double>(graph.n_right());
            const double auto_v = std::min(cube * cube * cube, 0x1.0p40);
            v = std::max<std::uint64_t>(4096, static_cast<std::uint64_t>(auto_v));
        } else {
            // Combined offsets live inside a pi/(2n) slice; keep the slice
            // subdivision coarse enough that the pi/(8nV) equality test sits
            // far above double-precision cancellation dust.
            v = 4096;
        }
    }

    Rng rng(derive_seed(seed, 0xc0de));
    std::vector<double> ident(n * d, 0.0), verif(n * d, 0.0);
    const double step = kPi / (2.0 * static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t t = 0; t < d; ++t) {
            const std::size_t e = j * d + t;
            if (mode == MatrixMode::Split) {
                ident[e] = static_cast<double>(j) * step;
                verif[e] = static_cast<double>(rng.next_index(v)) * (kPi / 2.0) /
                           static_cast<double>(v);
            } else {
                const double offset = static_cast<double>(rng.next_index(v)) * step /
                                      static_cast<double>(v);
                ident[e] = static_cast<double>(j) * step + offset;
            }
        }
    }
    return with_phases(graph, mode, v, std::move(ident), std::move(verif));
}

ExactEnsemble ExactEnsemble::with_phases(LeftRegularGraph graph, MatrixMode mode,
                                         std::uint64_t grid_levels,
                                         std::vector<double> ident_phase,
                                         std::vector<double> verif_phase) {
    const std::size_t edges = graph.n_left() * graph.degree();
    if (ident_phase.size() != edges || verif_phase.size() != edges)
        throw std::invalid_argument("ExactEnsemble: phase table size mismatch");
    ExactEnsemble ens;
    ens.graph_ = std::move(graph);
    ens.mode_ = mode;
    ens.grid_v_ = grid_levels;
    ens.ident_phase_ = std::move(ident_phase);
    ens.verif_phase_ = std::move(verif_phase);
    ens.ident_w_.resize(edges);
    ens.verif_w_.resize(edges);
    for (std::size_t e = 0; e < edges; ++e) {
        ens.ident_w_[e] = std::polar(1.0, ens.ident_phase_[e]);
        ens.verif_w_[e] = std::polar(1.0, ens.verif_phase_[e]);
    }
    return ens;
}

namespace {

void accumulate(const ExactEnsemble& ens, MeasurementVector& y, std::size_t j, double xv) {
    const auto& g = ens.graph();
    const std::size_t d = g.degree();
    for (std::size_t t = 0; t < d; ++t) {
        const std::size_t i = g.neighbors(j)[t];
        const std::size_t e = j * d + t;
        if (ens.mode() == MatrixMode::Split) {
            y[2 * i] += xv * ens.ident_weight(e);
            y[2 * i + 1] += xv * ens.verif_weight(e);
        } else {
            y[i] += xv * ens.ident_weight(e);
        }
    }
}

}  // namespace

MeasurementVector encode(const ExactEnsemble& ens, const SparseVector& x, std::uint64_t* ops) {
    if (x.length != ens.graph().n_left())
        throw std::invalid_argument("encode: signal length mismatch");
    MeasurementVector y(ens.rows(), {0.0, 0.0});
    for (const auto& [j, v] : x.entries) accumulate(ens, y, j, v);
    if (ops) *ops = x.entries.size() * ens.graph().degree();
    return y;
}

MeasurementVector encode(const ExactEnsemble& ens, const std::vector<double>& x,
                         std::uint64_t* ops) {
    if (x.size() != ens.graph().n_left())
        throw std::invalid_argument("encode: signal length mismatch");
    MeasurementVector y(ens.rows(), {0.0, 0.0});
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] != 0.0) accumulate(ens, y, j, x[j]);
    if (ops) *ops = x.size() * ens.graph().degree();
    return y;
}

MeasurementVector update(const ExactEnsemble& ens, const MeasurementVector& y, std::size_t j,
                         double delta, std::uint64_t* ops) {
    if (j >= ens.graph().n_left()) throw std::invalid_argument("update: index out of range");
    if (y.size() != ens.rows()) throw std::invalid_argument("update: measurement size mismatch");
    MeasurementVector out = y;
    accumulate(ens, out, j, delta);
    if (ops)
        *ops = ens.graph().degree() * (ens.mode() == MatrixMode::Split ? std::size_t{2}
                                                                       : std::size_t{1});
    return out;
}

namespace detail {

std::optional<LeafHit> probe_leaf(const ExactEnsemble& ens, std::size_t i,
                                  std::complex<double> uI, std::complex<double> uV,
                                  double zero_tol, double verif_tol) {
    const auto& g = ens.graph();
    const double n = static_cast<double>(g.n_left());

    if (ens.mode() == MatrixMode::Split) {
        if (std::abs(uI) <= zero_tol || std::abs(uV) <= zero_tol) return std::nullopt;
        double theta = std::arg(uI);
        if (theta < 0.0) theta += 2.0 * kPi;
        double v = theta * 2.0 * n / kPi;  // leaf phases land on integers of [0,n) or [2n,3n)
        if (v >= 4.0 * n - 0.5) v -= 4.0 * n;
        const double r = std::round(v);
        if (std::abs(v - r) >= 1e-6) return std::nullopt;
        std::size_t j;
        if (r >= -0.5 && r < n) {
            j = static_cast<std::size_t>(r);
        } else if (r >= 2.0 * n && r < 3.0 * n) {
            j = static_cast<std::size_t>(r - 2.0 * n);
        } else {
            return std::nullopt;
        }
        if (!g.has_edge(j, i)) return std::nullopt;
        const std::size_t e = ens.edge_index(j, i);
        const std::complex<double> expected =
            uI * std::polar(1.0, ens.verif_phase(e) - ens.ident_phase(e));
        if (std::abs(expected - uV) > verif_tol) return std::nullopt;
        return LeafHit{j, (uI * std::conj(ens.ident_weight(e))).real()};
    }

    // Combined: structured bits name j, offset bits are the verification.
    if (std::abs(uI) <= zero_tol) return std::nullopt;
    double theta = std::arg(uI);
    if (theta < 0.0) theta += 2.0 * kPi;
    double v = theta * 2.0 * n / kPi;
    if (v >= 4.0 * n - 0.5) v -= 4.0 * n;
    const double shift = 0.5 / static_cast<double>(ens.grid_levels());
    bool negative = false;
    double cell;
    if (v >= -0.5 && v < n) {
        cell = std::floor(v + shift);
    } else if (v >= 2.0 * n - 0.5 && v < 3.0 * n) {
        negative = true;
        cell = std::floor(v - 2.0 * n + shift);
    } else {
        return std::nullopt;
    }
    if (cell < 0.0 || cell >= n) return std::nullopt;
    const std::size_t j = static_cast<std::size_t>(cell);
    if (!g.has_edge(j, i)) return std::nullopt;
    const std::size_t e = ens.edge_index(j, i);
    const double target = ens.ident_phase(e) + (negative ? kPi : 0.0);
    const double diff = std::remainder(theta - target, 2.0 * kPi);
    const double tol = kPi / (8.0 * n * static_cast<double>(ens.grid_levels()));
    if (std::abs(diff) > tol) return std::nullopt;
    return LeafHit{j, (uI * std::conj(ens.ident_weight(e))).real()};
}

}  // namespace detail

DecodeReport decode(const ExactEnsemble& ens, const MeasurementVector& y, std::uint64_t seed,
                    std::size_t iter_cap) {
    if (y.size() != ens.rows()) throw std::invalid_argument("decode: measurement size mismatch");
    const auto& g = ens.graph();
    const std::size_t n = g.n_left();
    const std::size_t m_prime = g.n_right();
    const std::size_t d = g.degree();
    const bool split = ens.mode() == MatrixMode::Split;
    if (iter_cap == 0) iter_cap = 2 * m_prime + 16;

    const double scale = std::max(1.0, linf_norm(y));
    const double zero_tol = 1e-12 * scale;
    const double verif_tol = 1e-9 * scale;

    MeasurementVector res = y;
    auto row_i = [&](std::size_t i) { return split ? res[2 * i] : res[i]; };
    auto row_v = [&](std::size_t i) { return split ? res[2 * i + 1] : std::complex<double>{}; };

    DecodeReport report;
    std::uint64_t ops = 0;
    Rng rng(derive_seed(seed, 0xdecd));

    IndexedSet leaves(m_prime);
    for (std::size_t i = 0; i < m_prime; ++i) {
        ops += split ? 4 : 2;  // angle computations plus identify/verify checks
        if (detail::probe_leaf(ens, i, row_i(i), row_v(i), zero_tol, verif_tol)) leaves.insert(i);
    }

    std::vector<double> xhat(n, 0.0);
    std::vector<char> assigned(n, 0);
    bool anomaly = false;
    std::size_t passes = 0;

    while (!leaves.empty() && passes < iter_cap) {
        ++passes;
        const std::size_t i = leaves.pick(rng);
        ops += 2;
        const auto hit = detail::probe_leaf(ens, i, row_i(i), row_v(i), zero_tol, verif_tol);
        if (!hit) {
            leaves.erase(i);
            continue;
        }
        const std::size_t j = hit->j;
        if (assigned[j]) anomaly = true;
        assigned[j] = 1;
        xhat[j] += hit->value;
        ++report.iterations;

        for (std::size_t t = 0; t < d; ++t) {
            const std::size_t p = g.neighbors(j)[t];
            const std::size_t e = j * d + t;
            if (p == i) {
                // The resolved node's contribution is removed exactly.
                if (split) {
                    res[2 * i] = {0.0, 0.0};
                    res[2 * i + 1] = {0.0, 0.0};
                } else {
                    res[i] = {0.0, 0.0};
                }
                leaves.erase(i);
                continue;
            }
            if (split) {
                res[2 * p] -= hit->value * ens.ident_weight(e);
                res[2 * p + 1] -= hit->value * ens.verif_weight(e);
                ops += 4;
            } else {
                res[p] -= hit->value * ens.ident_weight(e);
                ops += 2;
            }
            ops += 2;
            if (detail::probe_leaf(ens, p, row_i(p), row_v(p), zero_tol, verif_tol))
                leaves.insert(p);
            else
                leaves.erase(p);
        }
    }

    report.residual_linf = linf_norm(res);
    report.counted_ops = ops;
    if (!leaves.empty()) {
        report.status = DecodeStatus::IterationCap;
    } else if (report.residual_linf <= zero_tol) {
        report.status = DecodeStatus::Success;
    } else {
        report.status = anomaly ? DecodeStatus::VerificationAnomaly : DecodeStatus::StuckCore;
    }

    report.xhat.length = n;
    for (std::size_t j = 0; j < n; ++j)
        if (assigned[j] && xhat[j] != 0.0) report.xhat.entries.emplace_back(j, xhat[j]);
    return report;
}

std::optional<double> query(const ExactEnsemble& ens, const MeasurementVector& y, std::size_t j) {
    const auto& g = ens.graph();
    if (j >= g.n_left()) throw std::invalid_argument("query: index out of range");
    if (y.size() != ens.rows()) throw std::invalid_argument("query: measurement size mismatch");
    const bool split = ens.mode() == MatrixMode::Split;
    const double scale = std::max(1.0, linf_norm(y));
    const double zero_tol = 1e-12 * scale;
    const double verif_tol = 1e-9 * scale;

    // A zero measurement among j's neighbors certifies x_j = 0.
    for (std::size_t t = 0; t < g.degree(); ++t) {
        const std::size_t i = g.neighbors(j)[t];
        const bool zero = split ? std::abs(y[2 * i]) <= zero_tol &&
                                      std::abs(y[2 * i + 1]) <= zero_tol
                                : std::abs(y[i]) <= zero_tol;
        if (zero) return 0.0;
    }
    for (std::size_t t = 0; t < g.degree(); ++t) {
        const std::size_t i = g.neighbors(j)[t];
        const auto uI = split ? y[2 * i] : y[i];
        const auto uV = split ? y[2 * i + 1] : std::complex<double>{};
        const auto hit = detail::probe_leaf(ens, i, uI, uV, zero_tol, verif_tol);
        if (hit && hit->j == j) return hit->value;
    }
    return std::nullopt;
}

void save_exact_ensemble(const std::string& graph_path, const std::string& phase_path,
                         const ExactEnsemble& ens) {
    save_graph(graph_path, ens.graph());
    std::ofstream os(phase_path);
    if (!os) throw std::runtime_error("save_exact_ensemble: cannot open " + phase_path);
    os << (ens.mode() == MatrixMode::Split ? "split" : "combined") << ' ' << ens.grid_levels()
       << '\n';
    os << std::setprecision(17);
    const auto& g = ens.graph();
    for (std::size_t j = 0; j < g.n_left(); ++j)
        for (std::size_t t = 0; t < g.degree(); ++t) {
            const std::size_t e = j * g.degree() + t;
            os << g.neighbors(j)[t] << ' ' << j << ' ' << ens.ident_phase(e) << ' '
               << ens.verif_phase(e) << '\n';
        }
}

ExactEnsemble load_exact_ensemble(const std::string& graph_path, const std::string& phase_path) {
    LeftRegularGraph graph = load_graph(graph_path);
    std::ifstream is(phase_path);
    if (!is) throw std::runtime_error("load_exact_ensemble: cannot open " + phase_path);
    std::string mode_word;
    std::uint64_t v = 0;
    if (!(is >> mode_word >> v)) throw std::runtime_error("load_exact_ensemble: bad header");
    const MatrixMode mode = mode_word == "split" ? MatrixMode::Split : MatrixMode::Combined;
    const std::size_t edges = graph.n_left() * graph.degree();
    std::vector<double> ident(edges, 0.0), verif(edges, 0.0);
    for (std::size_t e = 0; e < edges; ++e) {
        std::size_t i = 0, j = 0;
        double ip = 0.0, vp = 0.0;
        if (!(is >> i >> j >> ip >> vp))
            throw std::runtime_error("load_exact_ensemble: truncated phase table");
        const std::size_t idx = j * graph.degree() + graph.edge_slot(j, i);
        ident[idx] = ip;
        verif[idx] = vp;
    }
    return ExactEnsemble::with_phases(std::move(graph), mode, v, std::move(ident),
                                      std::move(verif));
}

void save_measurements(const std::string& path, const MeasurementVector& y) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_measurements: cannot open " + path);
    os << y.size() << '\n' << std::setprecision(17);
    for (const auto& v : y) os << v.real() << ' ' << v.imag() << '\n';
}

MeasurementVector load_measurements(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_measurements: cannot open " + path);
    std::size_t sz = 0;
    if (!(is >> sz)) throw std::runtime_error("load_measurements: bad header");
    MeasurementVector y(sz);
    for (std::size_t i = 0; i < sz; ++i) {
        double re = 0.0, im = 0.0;
        if (!(is >> re >> im)) throw std::runtime_error("load_measurements: truncated");
        y[i] = {re, im};
    }
    return y;
}

}  // namespace shofa
