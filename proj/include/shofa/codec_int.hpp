// Integer-entry measurement codec: entries live in [1, M], identification
// uses coprime weight vectors in [M]^R whose normalization c/c1 names the
// left node, and decoding matches normalized measured groups against a
// precomputed dictionary.
#ifndef SHOFA_CODEC_INT_HPP
#define SHOFA_CODEC_INT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "shofa/codec_exact.hpp"
#include "shofa/graph.hpp"
#include "shofa/signal.hpp"

namespace shofa {

using WeightVector = std::vector<std::uint32_t>;  // R components in [1, M]

// All vectors in [M]^R with componentwise gcd 1, when M^R is small enough to
// enumerate (M^R <= 10^6). Throws std::invalid_argument beyond that.
std::vector<WeightVector> enumerate_coprime_vectors(std::uint32_t M, std::size_t R);

// Uniform sample of `count` distinct members of the coprime set; enumerated
// and shuffled when M^R <= 10^6, rejection-sampled otherwise (where
// count <= M^R/2 keeps rejection feasible). Throws std::invalid_argument
// ("ensemble too small") on an infeasible count.
std::vector<WeightVector> gen_coprime_vectors(std::uint32_t M, std::size_t R, std::size_t count,
                                              std::uint64_t seed);

// Group layout: right node i owns rows [i*2R, i*2R+R) identification and
// [i*2R+R, i*2R+2R) verification.
class IntEnsemble {
  public:
    static IntEnsemble build(const LeftRegularGraph& graph, std::uint32_t M, std::size_t R,
                             std::uint64_t seed);

    const LeftRegularGraph& graph() const { return graph_; }
    std::uint32_t M() const { return M_; }
    std::size_t R() const { return R_; }
    std::size_t rows() const { return 2 * R_ * graph_.n_right(); }

    std::size_t edge_index(std::size_t left, std::size_t right) const {
        return left * graph_.degree() + graph_.edge_slot(left, right);
    }
    // Identification vectors are a function of the left node alone.
    const WeightVector& ident_vec(std::size_t left) const { return ident_[left]; }
    const WeightVector& verif_vec(std::size_t edge) const { return verif_[edge]; }

    // Left nodes whose identification vector equals `key` (usually one).
    const std::vector<std::size_t>* lookup(const WeightVector& key) const;

  private:
    friend IntEnsemble load_int_ensemble(const std::string&, const std::string&);

    LeftRegularGraph graph_;
    std::uint32_t M_ = 2;
    std::size_t R_ = 1;
    std::vector<WeightVector> ident_;  // per left node
    std::vector<WeightVector> verif_;  // per edge

    struct KeyHash {
        std::size_t operator()(const WeightVector& v) const {
            std::size_t h = 1469598103934665603ULL;
            for (const std::uint32_t c : v) {
                h ^= c;
                h *= 1099511628211ULL;
            }
            return h;
        }
    };
    std::unordered_map<WeightVector, std::vector<std::size_t>, KeyHash> ident_map_;
};

// Exact linear measurement with integer coefficients; 2R m' real outputs.
std::vector<double> encode_int(const IntEnsemble& ens, const SparseVector& x);
std::vector<double> encode_int(const IntEnsemble& ens, const std::vector<double>& x);

// Peeling decode with normalized-vector matching in place of phase matching.
DecodeReport decode_int(const IntEnsemble& ens, const std::vector<double>& y, std::uint64_t seed,
                        std::size_t iter_cap = 0);

// Graph file plus per-edge text table "i j c_1 .. c_R v_1 .. v_R".
void save_int_ensemble(const std::string& graph_path, const std::string& table_path,
                       const IntEnsemble& ens);
IntEnsemble load_int_ensemble(const std::string& graph_path, const std::string& table_path);

namespace detail {

// Leaf probe for one right-node group (R identification then R verification
// residual rows). zero_tol marks numeric zeros; cmp_tol bounds the
// cross-multiplied proportionality mismatch.
std::optional<LeafHit> probe_leaf_int(const IntEnsemble& ens, std::size_t i, const double* gI,
                                      const double* gV, double zero_tol, double cmp_tol);

}  // namespace detail

}  // namespace shofa

#endif
