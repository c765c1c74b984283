#include "shofa/graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "shofa/rng.hpp"

namespace shofa {

LeftRegularGraph::LeftRegularGraph(std::size_t n_right,
                                   std::vector<std::vector<std::size_t>> adjacency) {
    n_left_ = adjacency.size();
    n_right_ = n_right;
    degree_ = n_left_ ? adjacency[0].size() : 0;
    adj_.reserve(n_left_ * degree_);
    for (auto& nbrs : adjacency) {
        if (nbrs.size() != degree_)
            throw std::invalid_argument("LeftRegularGraph: not left-regular");
        std::sort(nbrs.begin(), nbrs.end());
        for (std::size_t t = 0; t < nbrs.size(); ++t) {
            if (nbrs[t] >= n_right_)
                throw std::invalid_argument("LeftRegularGraph: right index out of range");
            if (t > 0 && nbrs[t] == nbrs[t - 1])
                throw std::invalid_argument("LeftRegularGraph: duplicate neighbor");
            adj_.push_back(nbrs[t]);
        }
    }
    // Reverse adjacency via counting sort.
    rev_off_.assign(n_right_ + 1, 0);
    for (const std::size_t r : adj_) ++rev_off_[r + 1];
    for (std::size_t i = 0; i < n_right_; ++i) rev_off_[i + 1] += rev_off_[i];
    rev_.resize(adj_.size());
    std::vector<std::size_t> cursor(rev_off_.begin(), rev_off_.end() - 1);
    for (std::size_t l = 0; l < n_left_; ++l)
        for (std::size_t t = 0; t < degree_; ++t) rev_[cursor[adj_[l * degree_ + t]]++] = l;
}

bool LeftRegularGraph::has_edge(std::size_t left, std::size_t right) const {
    const std::size_t* b = &adj_[left * degree_];
    return std::binary_search(b, b + degree_, right);
}

std::size_t LeftRegularGraph::edge_slot(std::size_t left, std::size_t right) const {
    const std::size_t* b = &adj_[left * degree_];
    return static_cast<std::size_t>(std::lower_bound(b, b + degree_, right) - b);
}

LeftRegularGraph sample_graph(std::size_t n, std::size_t m_prime, std::size_t d,
                              std::uint64_t seed) {
    if (m_prime == 0) throw std::invalid_argument("sample_graph: m_prime must be positive");
    if (d < 3) throw std::invalid_argument("sample_graph: degree must be at least 3");
    if (d > m_prime) throw std::invalid_argument("sample_graph: degree exceeds m_prime");

    Rng rng(derive_seed(seed, 0x6742));
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<std::size_t> pool(m_prime);
    for (std::size_t i = 0; i < m_prime; ++i) pool[i] = i;

    for (std::size_t l = 0; l < n; ++l) {
        auto& nbrs = adj[l];
        nbrs.reserve(d);
        if (2 * d >= m_prime) {
            // Dense regime: partial Fisher-Yates over the right nodes.
            for (std::size_t t = 0; t < d; ++t) {
                const std::size_t pick = t + rng.next_index(m_prime - t);
                std::swap(pool[t], pool[pick]);
                nbrs.push_back(pool[t]);
            }
        } else {
            while (nbrs.size() < d) {
                const std::size_t r = rng.next_index(m_prime);
                if (std::find(nbrs.begin(), nbrs.end(), r) == nbrs.end()) nbrs.push_back(r);
            }
        }
    }
    return LeftRegularGraph(m_prime, std::move(adj));
}

CoreReport peel_2core(const LeftRegularGraph& graph, const std::vector<std::size_t>& support) {
    CoreReport report;
    const std::size_t d = graph.degree();

    std::vector<char> alive(graph.n_left(), 0);
    for (const std::size_t l : support) {
        if (l >= graph.n_left()) throw std::invalid_argument("peel_2core: support out of range");
        alive[l] = 1;
    }

    // Degree of each right node within the surviving support.
    std::vector<std::size_t> rdeg(graph.n_right(), 0);
    for (const std::size_t l : support)
        for (std::size_t t = 0; t < d; ++t) ++rdeg[graph.neighbors(l)[t]];

    std::set<std::size_t> leaves;  // ordered: lowest-index right node peels first
    for (std::size_t r = 0; r < graph.n_right(); ++r)
        if (rdeg[r] == 1) leaves.insert(r);

    std::size_t remaining = 0;
    for (std::size_t l = 0; l < graph.n_left(); ++l) remaining += alive[l];

    while (!leaves.empty()) {
        const std::size_t r = *leaves.begin();
        leaves.erase(leaves.begin());
        if (rdeg[r] != 1) continue;
        // Find the unique surviving support node incident to r.
        std::size_t peeled = graph.n_left();
        auto [lo, hi] = graph.left_nodes_of(r);
        for (const std::size_t* p = lo; p != hi; ++p)
            if (alive[*p]) {
                peeled = *p;
                break;
            }
        alive[peeled] = 0;
        --remaining;
        report.peel_order.emplace_back(peeled, r);
        for (std::size_t t = 0; t < d; ++t) {
            const std::size_t q = graph.neighbors(peeled)[t];
            if (--rdeg[q] == 1)
                leaves.insert(q);
            else
                leaves.erase(q);
        }
    }

    for (std::size_t l = 0; l < graph.n_left(); ++l)
        if (alive[l]) report.residual_core.push_back(l);
    report.empty_core = remaining == 0;
    return report;
}

namespace {

// |N(S')| for the subset of S selected by `mask`.
std::size_t neighborhood_size(const LeftRegularGraph& graph, const std::vector<std::size_t>& S,
                              std::uint64_t mask, std::vector<std::uint32_t>& stamp,
                              std::uint32_t& epoch) {
    ++epoch;
    std::size_t count = 0;
    for (std::size_t t = 0; t < S.size(); ++t) {
        if (!((mask >> t) & 1ULL)) continue;
        for (std::size_t e = 0; e < graph.degree(); ++e) {
            const std::size_t r = graph.neighbors(S[t])[e];
            if (stamp[r] != epoch) {
                stamp[r] = epoch;
                ++count;
            }
        }
    }
    return count;
}

}  // namespace

bool check_expansion(const LeftRegularGraph& graph, const std::vector<std::size_t>& S,
                     double factor, bool exhaustive, std::uint64_t seed) {
    const double need_per_node = factor * static_cast<double>(graph.degree());
    std::vector<std::uint32_t> stamp(graph.n_right(), 0);
    std::uint32_t epoch = 0;

    if (exhaustive) {
        if (S.size() > 20)
            throw std::invalid_argument("check_expansion: |S| > 20 is infeasible to enumerate");
        const std::uint64_t total = 1ULL << S.size();
        for (std::uint64_t mask = 1; mask < total; ++mask) {
            const std::size_t sz = static_cast<std::size_t>(std::popcount(mask));
            const std::size_t nbrs = neighborhood_size(graph, S, mask, stamp, epoch);
            if (static_cast<double>(nbrs) < need_per_node * static_cast<double>(sz) - 1e-9)
                return false;
        }
        return true;
    }

    Rng rng(derive_seed(seed, 0xe4a0));
    constexpr std::size_t kSamples = 10000;
    std::vector<std::size_t> subset;
    for (std::size_t s = 0; s < kSamples; ++s) {
        subset.clear();
        for (const std::size_t l : S)
            if (rng.next_u64() & 1ULL) subset.push_back(l);
        if (subset.empty()) continue;
        ++epoch;
        std::size_t nbrs = 0;
        for (const std::size_t l : subset)
            for (std::size_t e = 0; e < graph.degree(); ++e) {
                const std::size_t r = graph.neighbors(l)[e];
                if (stamp[r] != epoch) {
                    stamp[r] = epoch;
                    ++nbrs;
                }
            }
        if (static_cast<double>(nbrs) <
            need_per_node * static_cast<double>(subset.size()) - 1e-9)
            return false;
    }
    return true;
}

double leaf_fraction(const LeftRegularGraph& graph, const std::vector<std::size_t>& S) {
    if (S.empty()) throw std::invalid_argument("leaf_fraction: S must be nonempty");
    std::vector<std::size_t> hits(graph.n_right(), 0);
    for (const std::size_t l : S)
        for (std::size_t t = 0; t < graph.degree(); ++t) ++hits[graph.neighbors(l)[t]];
    std::size_t neighbors = 0, leaves = 0;
    for (std::size_t r = 0; r < graph.n_right(); ++r) {
        if (hits[r] > 0) ++neighbors;
        if (hits[r] == 1) ++leaves;
    }
    return static_cast<double>(leaves) / static_cast<double>(neighbors);
}

void write_graph(std::ostream& os, const LeftRegularGraph& graph) {
    os << graph.n_left() << ' ' << graph.n_right() << ' ' << graph.degree() << '\n';
    for (std::size_t l = 0; l < graph.n_left(); ++l) {
        for (std::size_t t = 0; t < graph.degree(); ++t) {
            if (t) os << ' ';
            os << graph.neighbors(l)[t];
        }
        os << '\n';
    }
}

LeftRegularGraph read_graph(std::istream& is) {
    std::size_t n = 0, m = 0, d = 0;
    if (!(is >> n >> m >> d)) throw std::runtime_error("read_graph: bad header");
    std::vector<std::vector<std::size_t>> adj(n, std::vector<std::size_t>(d));
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t t = 0; t < d; ++t)
            if (!(is >> adj[l][t])) throw std::runtime_error("read_graph: truncated adjacency");
    return LeftRegularGraph(m, std::move(adj));
}

void save_graph(const std::string& path, const LeftRegularGraph& graph) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_graph: cannot open " + path);
    write_graph(os, graph);
}

LeftRegularGraph load_graph(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_graph: cannot open " + path);
    return read_graph(is);
}

}  // namespace shofa
