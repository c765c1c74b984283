#include "shofa/codec_int.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

#include "shofa/rng.hpp"

namespace shofa {

namespace {

constexpr std::size_t kNpos = static_cast<std::size_t>(-1);
constexpr double kEnumLimit = 1e6;

double pow_double(std::uint32_t M, std::size_t R) {
    double p = 1.0;
    for (std::size_t r = 0; r < R; ++r) p *= static_cast<double>(M);
    return p;
}

std::uint32_t vec_gcd(const WeightVector& v) {
    std::uint32_t g = 0;
    for (const std::uint32_t c : v) g = std::gcd(g, c);
    return g;
}

// Lexicographic order of the normalized vectors c/c1: component ratios are
// compared by cross-multiplication, never as floats.
bool normalized_less(const WeightVector& a, const WeightVector& b) {
    for (std::size_t r = 1; r < a.size(); ++r) {
        const std::uint64_t lhs = static_cast<std::uint64_t>(a[r]) * b[0];
        const std::uint64_t rhs = static_cast<std::uint64_t>(b[r]) * a[0];
        if (lhs != rhs) return lhs < rhs;
    }
    return false;
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

double linf_norm(const std::vector<double>& y) {
    double m = 0.0;
    for (const double v : y) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

std::vector<WeightVector> enumerate_coprime_vectors(std::uint32_t M, std::size_t R) {
    if (M < 2 || R < 1) throw std::invalid_argument("enumerate_coprime_vectors: need M>=2, R>=1");
    if (pow_double(M, R) > kEnumLimit)
        throw std::invalid_argument("enumerate_coprime_vectors: M^R too large to enumerate");
    std::vector<WeightVector> out;
    WeightVector cur(R, 1);
    for (;;) {
        if (vec_gcd(cur) == 1) out.push_back(cur);
        std::size_t r = R;
        while (r > 0 && cur[r - 1] == M) --r;
        if (r == 0) break;
        ++cur[r - 1];
        for (std::size_t t = r; t < R; ++t) cur[t] = 1;
    }
    return out;
}

std::vector<WeightVector> gen_coprime_vectors(std::uint32_t M, std::size_t R, std::size_t count,
                                              std::uint64_t seed) {
    if (count == 0) return {};
    Rng rng(derive_seed(seed, 0xc091));
    if (pow_double(M, R) <= kEnumLimit) {
        std::vector<WeightVector> all = enumerate_coprime_vectors(M, R);
        if (count > all.size())
            throw std::invalid_argument("gen_coprime_vectors: ensemble too small for count");
        for (std::size_t t = 0; t < count; ++t) {
            const std::size_t pick = t + rng.next_index(all.size() - t);
            std::swap(all[t], all[pick]);
        }
        all.resize(count);
        return all;
    }
    if (static_cast<double>(count) > pow_double(M, R) / 2.0)
        throw std::invalid_argument("gen_coprime_vectors: ensemble too small for count");
    std::set<WeightVector> seen;
    std::vector<WeightVector> out;
    out.reserve(count);
    WeightVector cand(R);
    while (out.size() < count) {
        for (std::size_t r = 0; r < R; ++r)
            cand[r] = static_cast<std::uint32_t>(1 + rng.next_index(M));
        if (vec_gcd(cand) != 1) continue;
        if (seen.insert(cand).second) out.push_back(cand);
    }
    return out;
}

IntEnsemble IntEnsemble::build(const LeftRegularGraph& graph, std::uint32_t M, std::size_t R,
                               std::uint64_t seed) {
    if (M < 2 || R < 1) throw std::invalid_argument("build_int: need M>=2, R>=1");
    const std::size_t n = graph.n_left();
    const std::size_t d = graph.degree();
    const std::size_t edges = n * d;
    if (pow_double(M, R) > kEnumLimit)
        throw std::invalid_argument("build_int: M^R too large to enumerate the dictionary");

    IntEnsemble ens;
    ens.graph_ = graph;
    ens.M_ = M;
    ens.R_ = R;

    std::vector<WeightVector> classes = enumerate_coprime_vectors(M, R);
    std::sort(classes.begin(), classes.end(), normalized_less);

    ens.ident_.resize(n);
    if (classes.size() >= n) {
        // One class per left node, in normalized lexicographic rank order.
        for (std::size_t j = 0; j < n; ++j) ens.ident_[j] = classes[j];
    } else {
        // Fewer directions than left nodes: reuse classes, but keep the
        // vectors incident to any single right node distinct so that leaf
        // identification within a group stays unambiguous.
        std::vector<std::vector<std::size_t>> assigned_at(graph.n_right());
        std::vector<std::size_t> class_of(n, kNpos);
        std::vector<char> banned(classes.size(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::size_t> touched;
            for (std::size_t t = 0; t < d; ++t) {
                const std::size_t i = graph.neighbors(j)[t];
                for (const std::size_t other : assigned_at[i]) {
                    if (!banned[class_of[other]]) {
                        banned[class_of[other]] = 1;
                        touched.push_back(class_of[other]);
                    }
                }
            }
            std::size_t chosen = kNpos;
            const std::size_t start = j % classes.size();
            for (std::size_t off = 0; off < classes.size(); ++off) {
                const std::size_t c = (start + off) % classes.size();
                if (!banned[c]) {
                    chosen = c;
                    break;
                }
            }
            for (const std::size_t c : touched) banned[c] = 0;
            if (chosen == kNpos)
                throw std::invalid_argument("build_int: ensemble too small for this graph");
            class_of[j] = chosen;
            ens.ident_[j] = classes[chosen];
            for (std::size_t t = 0; t < d; ++t) assigned_at[graph.neighbors(j)[t]].push_back(j);
        }
    }

    for (std::size_t j = 0; j < n; ++j) ens.ident_map_[ens.ident_[j]].push_back(j);
    if (classes.size() >= n) {
        // The normalized-vector identification map must be injective here.
        for (const auto& [key, lefts] : ens.ident_map_)
            if (lefts.size() != 1)
                throw std::logic_error("build_int: identification map not injective");
    }

    // Verification vectors: distinct across all edges when the coprime set
    // is large enough, otherwise distinct within each right node's group.
    ens.verif_.resize(edges);
    if (classes.size() >= edges) {
        const auto sample = gen_coprime_vectors(M, R, edges, derive_seed(seed, 1));
        std::size_t next = 0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t t = 0; t < d; ++t) ens.verif_[j * d + t] = sample[next++];
    } else {
        for (std::size_t i = 0; i < graph.n_right(); ++i) {
            const std::size_t deg = graph.right_degree(i);
            if (deg > classes.size())
                throw std::invalid_argument("build_int: ensemble too small for this graph");
            const auto sample = gen_coprime_vectors(M, R, deg, derive_seed(seed, 1000 + i));
            auto [lo, hi] = graph.left_nodes_of(i);
            std::size_t t = 0;
            for (const std::size_t* p = lo; p != hi; ++p, ++t)
                ens.verif_[ens.edge_index(*p, i)] = sample[t];
        }
    }
    return ens;
}

const std::vector<std::size_t>* IntEnsemble::lookup(const WeightVector& key) const {
    const auto it = ident_map_.find(key);
    return it == ident_map_.end() ? nullptr : &it->second;
}

namespace {

void accumulate_int(const IntEnsemble& ens, std::vector<double>& y, std::size_t j, double xv) {
    const auto& g = ens.graph();
    const std::size_t d = g.degree();
    const std::size_t R = ens.R();
    const WeightVector& iv = ens.ident_vec(j);
    for (std::size_t t = 0; t < d; ++t) {
        const std::size_t i = g.neighbors(j)[t];
        const WeightVector& vv = ens.verif_vec(j * d + t);
        const std::size_t group = i * 2 * R;
        for (std::size_t r = 0; r < R; ++r) {
            y[group + r] += xv * static_cast<double>(iv[r]);
            y[group + R + r] += xv * static_cast<double>(vv[r]);
        }
    }
}

}  // namespace

std::vector<double> encode_int(const IntEnsemble& ens, const SparseVector& x) {
    if (x.length != ens.graph().n_left())
        throw std::invalid_argument("encode_int: signal length mismatch");
    std::vector<double> y(ens.rows(), 0.0);
    for (const auto& [j, v] : x.entries) accumulate_int(ens, y, j, v);
    return y;
}

std::vector<double> encode_int(const IntEnsemble& ens, const std::vector<double>& x) {
    if (x.size() != ens.graph().n_left())
        throw std::invalid_argument("encode_int: signal length mismatch");
    std::vector<double> y(ens.rows(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] != 0.0) accumulate_int(ens, y, j, x[j]);
    return y;
}

namespace detail {

std::optional<LeafHit> probe_leaf_int(const IntEnsemble& ens, std::size_t i, const double* gI,
                                      const double* gV, double zero_tol, double cmp_tol) {
    const std::size_t R = ens.R();
    const std::uint32_t M = ens.M();

    bool any = false;
    for (std::size_t r = 0; r < R; ++r)
        if (std::abs(gI[r]) > zero_tol || std::abs(gV[r]) > zero_tol) any = true;
    if (!any) return std::nullopt;                      // zero node
    if (std::abs(gI[0]) <= zero_tol) return std::nullopt;  // cannot normalize

    // Reconstruct the minimal gcd-1 integer direction of gI: the first first
    // component that makes every cross-multiplied ratio integral is the
    // canonical representative.
    WeightVector key(R, 0);
    bool found = false;
    for (std::uint32_t c1 = 1; c1 <= M && !found; ++c1) {
        key[0] = c1;
        bool ok = true;
        for (std::size_t r = 1; r < R && ok; ++r) {
            const double num = gI[r] * static_cast<double>(c1);
            const double cr = std::round(num / gI[0]);
            if (cr < 1.0 || cr > static_cast<double>(M)) {
                ok = false;
                break;
            }
            const double scale = std::max({1.0, std::abs(num), std::abs(gI[0] * cr)});
            if (std::abs(num - gI[0] * cr) > cmp_tol * scale) {
                ok = false;
                break;
            }
            key[r] = static_cast<std::uint32_t>(cr);
        }
        if (ok && vec_gcd(key) == 1) found = true;
    }
    if (!found) return std::nullopt;

    const auto* lefts = ens.lookup(key);
    if (!lefts) return std::nullopt;
    std::size_t j = kNpos;
    for (const std::size_t cand : *lefts) {
        if (!ens.graph().has_edge(cand, i)) continue;
        if (j != kNpos) return std::nullopt;  // ambiguous; reject
        j = cand;
    }
    if (j == kNpos) return std::nullopt;

    const WeightVector& iv = ens.ident_vec(j);
    const WeightVector& vv = ens.verif_vec(ens.edge_index(j, i));
    // Full proportionality of the identification rows against iv.
    for (std::size_t r = 0; r < R; ++r) {
        const double lhs = gI[r] * static_cast<double>(iv[0]);
        const double rhs = gI[0] * static_cast<double>(iv[r]);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (std::abs(lhs - rhs) > cmp_tol * scale) return std::nullopt;
    }
    // Verification rows must be the same multiple of the edge's vector.
    for (std::size_t r = 0; r < R; ++r) {
        const double lhs = gV[r] * static_cast<double>(iv[0]);
        const double rhs = gI[0] * static_cast<double>(vv[r]);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        if (std::abs(lhs - rhs) > cmp_tol * scale) return std::nullopt;
    }
    return LeafHit{j, gI[0] / static_cast<double>(iv[0])};
}

}  // namespace detail

DecodeReport decode_int(const IntEnsemble& ens, const std::vector<double>& y, std::uint64_t seed,
                        std::size_t iter_cap) {
    if (y.size() != ens.rows())
        throw std::invalid_argument("decode_int: measurement size mismatch");
    const auto& g = ens.graph();
    const std::size_t n = g.n_left();
    const std::size_t m_prime = g.n_right();
    const std::size_t d = g.degree();
    const std::size_t R = ens.R();
    if (iter_cap == 0) iter_cap = 2 * m_prime + 16;

    const double scale = std::max(1.0, linf_norm(y));
    const double zero_tol = 1e-12 * scale;
    const double cmp_tol = 1e-9;

    std::vector<double> res = y;
    auto gI = [&](std::size_t i) { return res.data() + i * 2 * R; };
    auto gV = [&](std::size_t i) { return res.data() + i * 2 * R + R; };

    DecodeReport report;
    std::uint64_t ops = 0;
    Rng rng(derive_seed(seed, 0x1f7e));

    IndexedSet leaves(m_prime);
    for (std::size_t i = 0; i < m_prime; ++i) {
        ops += 2 * R;
        if (detail::probe_leaf_int(ens, i, gI(i), gV(i), zero_tol, cmp_tol)) leaves.insert(i);
    }

    std::vector<double> xhat(n, 0.0);
    std::vector<char> assigned(n, 0);
    bool anomaly = false;
    std::size_t passes = 0;

    while (!leaves.empty() && passes < iter_cap) {
        ++passes;
        const std::size_t i = leaves.pick(rng);
        ops += 2 * R;
        const auto hit = detail::probe_leaf_int(ens, i, gI(i), gV(i), zero_tol, cmp_tol);
        if (!hit) {
            leaves.erase(i);
            continue;
        }
        const std::size_t j = hit->j;
        if (assigned[j]) anomaly = true;
        assigned[j] = 1;
        xhat[j] += hit->value;
        ++report.iterations;

        const WeightVector& iv = ens.ident_vec(j);
        for (std::size_t t = 0; t < d; ++t) {
            const std::size_t p = g.neighbors(j)[t];
            if (p == i) {
                double* zi = gI(i);
                for (std::size_t r = 0; r < 2 * R; ++r) zi[r] = 0.0;
                leaves.erase(i);
                continue;
            }
            const WeightVector& vv = ens.verif_vec(j * d + t);
            double* pi = gI(p);
            double* pv = gV(p);
            for (std::size_t r = 0; r < R; ++r) {
                pi[r] -= hit->value * static_cast<double>(iv[r]);
                pv[r] -= hit->value * static_cast<double>(vv[r]);
            }
            ops += 4 * R;
            ops += 2 * R;
            if (detail::probe_leaf_int(ens, p, gI(p), gV(p), zero_tol, cmp_tol))
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

void save_int_ensemble(const std::string& graph_path, const std::string& table_path,
                       const IntEnsemble& ens) {
    save_graph(graph_path, ens.graph());
    std::ofstream os(table_path);
    if (!os) throw std::runtime_error("save_int_ensemble: cannot open " + table_path);
    os << ens.M() << ' ' << ens.R() << '\n';
    const auto& g = ens.graph();
    for (std::size_t j = 0; j < g.n_left(); ++j)
        for (std::size_t t = 0; t < g.degree(); ++t) {
            os << g.neighbors(j)[t] << ' ' << j;
            for (const std::uint32_t c : ens.ident_vec(j)) os << ' ' << c;
            for (const std::uint32_t c : ens.verif_vec(j * g.degree() + t)) os << ' ' << c;
            os << '\n';
        }
}

IntEnsemble load_int_ensemble(const std::string& graph_path, const std::string& table_path) {
    LeftRegularGraph graph = load_graph(graph_path);
    std::ifstream is(table_path);
    if (!is) throw std::runtime_error("load_int_ensemble: cannot open " + table_path);
    std::uint32_t M = 0;
    std::size_t R = 0;
    if (!(is >> M >> R)) throw std::runtime_error("load_int_ensemble: bad header");

    IntEnsemble ens;
    const std::size_t n = graph.n_left();
    const std::size_t d = graph.degree();
    ens.M_ = M;
    ens.R_ = R;
    ens.ident_.assign(n, WeightVector(R, 0));
    ens.verif_.assign(n * d, WeightVector(R, 0));
    std::vector<char> have_ident(n, 0);
    for (std::size_t line = 0; line < n * d; ++line) {
        std::size_t i = 0, j = 0;
        if (!(is >> i >> j)) throw std::runtime_error("load_int_ensemble: truncated table");
        WeightVector iv(R), vv(R);
        for (std::size_t r = 0; r < R; ++r)
            if (!(is >> iv[r])) throw std::runtime_error("load_int_ensemble: truncated table");
        for (std::size_t r = 0; r < R; ++r)
            if (!(is >> vv[r])) throw std::runtime_error("load_int_ensemble: truncated table");
        ens.ident_[j] = iv;
        have_ident[j] = 1;
        ens.verif_[j * d + graph.edge_slot(j, i)] = vv;
    }
    for (std::size_t j = 0; j < n; ++j)
        if (!have_ident[j]) throw std::runtime_error("load_int_ensemble: missing left node");
    ens.graph_ = std::move(graph);
    for (std::size_t j = 0; j < n; ++j) ens.ident_map_[ens.ident_[j]].push_back(j);
    return ens;
}

}  // namespace shofa
