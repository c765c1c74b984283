// Random left-regular bipartite graphs and the structural analyses
// (restricted 2-core peeling, subset expansion, leaf fraction) that
// determine whether a support set is decodable.
#ifndef SHOFA_GRAPH_HPP
#define SHOFA_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace shofa {

// n_left signal nodes of fixed degree, n_right measurement nodes.
class LeftRegularGraph {
  public:
    LeftRegularGraph() = default;

    // Builds from explicit adjacency; validates left-regularity and
    // distinctness, sorts neighbor lists, and fills the reverse adjacency.
    LeftRegularGraph(std::size_t n_right, std::vector<std::vector<std::size_t>> adjacency);

    std::size_t n_left() const { return n_left_; }
    std::size_t n_right() const { return n_right_; }
    std::size_t degree() const { return degree_; }

    // Sorted neighbor list of a left node (size == degree()).
    const std::size_t* neighbors(std::size_t left) const { return &adj_[left * degree_]; }
    bool has_edge(std::size_t left, std::size_t right) const;
    // Position of `right` within `left`'s neighbor list (for per-edge tables).
    std::size_t edge_slot(std::size_t left, std::size_t right) const;

    // Left nodes incident to a right node (CSR).
    std::pair<const std::size_t*, const std::size_t*> left_nodes_of(std::size_t right) const {
        return {rev_.data() + rev_off_[right], rev_.data() + rev_off_[right + 1]};
    }
    std::size_t right_degree(std::size_t right) const {
        return rev_off_[right + 1] - rev_off_[right];
    }

  private:
    std::size_t n_left_ = 0;
    std::size_t n_right_ = 0;
    std::size_t degree_ = 0;
    std::vector<std::size_t> adj_;      // n_left * degree, sorted per node
    std::vector<std::size_t> rev_off_;  // n_right + 1
    std::vector<std::size_t> rev_;
};

// Outcome of peeling the sub-graph restricted to a support set.
struct CoreReport {
    // (left node, resolving right node), in removal order.
    std::vector<std::pair<std::size_t, std::size_t>> peel_order;
    std::vector<std::size_t> residual_core;  // unpeeled left nodes, sorted
    bool empty_core = false;
};

// Each left node's neighbor set is a uniform sample of `d` distinct right
// nodes, independent across left nodes. Throws std::invalid_argument when
// d > m_prime, d < 3 or m_prime == 0.
LeftRegularGraph sample_graph(std::size_t n, std::size_t m_prime, std::size_t d,
                              std::uint64_t seed);

// Repeatedly removes a right node incident to exactly one surviving support
// node together with that support node. Lowest-index right node peels first.
CoreReport peel_2core(const LeftRegularGraph& graph, const std::vector<std::size_t>& support);

// True iff every subset S' of S has |N(S')| >= factor * d * |S'|. Exhaustive
// for |S| <= 20 (throws std::invalid_argument beyond that when exhaustive is
// forced); otherwise falls back to 10^4 sampled subsets.
bool check_expansion(const LeftRegularGraph& graph, const std::vector<std::size_t>& S,
                     double factor, bool exhaustive = true, std::uint64_t seed = 0);

// (# right nodes with exactly one neighbor in S) / |N(S)|. S must be nonempty.
double leaf_fraction(const LeftRegularGraph& graph, const std::vector<std::size_t>& S);

// Line-oriented text format: header "n m d", one line per left node with its
// d neighbors (0-indexed, space-separated).
void write_graph(std::ostream& os, const LeftRegularGraph& graph);
LeftRegularGraph read_graph(std::istream& is);
void save_graph(const std::string& path, const LeftRegularGraph& graph);
LeftRegularGraph load_graph(const std::string& path);

}  // namespace shofa

#endif
