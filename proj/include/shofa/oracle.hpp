// Brute-force references for validating the codecs on small instances:
// exhaustive-support least-squares decoding and the fixed-point definition
// of the restricted 2-core. Deliberately shares no code with the peeling
// decoders beyond the ensemble types.
#ifndef SHOFA_ORACLE_HPP
#define SHOFA_ORACLE_HPP

#include <cstddef>
#include <vector>

#include "shofa/codec_exact.hpp"
#include "shofa/graph.hpp"
#include "shofa/signal.hpp"

namespace shofa {

struct OracleResult {
    std::vector<SparseVector> solutions;  // all consistent signals found
    bool unique = false;                  // exactly one distinct solution
};

// Enumerates all supports of size <= k_max (n <= 16, k_max <= 3), solves the
// induced least-squares system per support, and keeps every support whose
// full residual is <= 1e-8 * max(1, ||y||_inf), deduplicating solutions.
// The measurement operator is handed over as an explicit dense real matrix
// (rows x n) so the oracle stays independent of the codec encode paths.
OracleResult brute_force_decode(const std::vector<std::vector<double>>& matrix,
                                const std::vector<double>& y, std::size_t k_max);

// Convenience adapter: flattens an exact-codec ensemble (complex rows become
// real/imaginary row pairs) and calls the dense-matrix oracle.
OracleResult brute_force_decode(const ExactEnsemble& ens, const MeasurementVector& y,
                                std::size_t k_max);

// Tests 2-core emptiness by the definition: true iff no nonempty subset T of
// `support` has every incident right node covered at least twice within T.
// Requires |support| <= 12 and m' <= 24.
bool brute_2core_empty(const LeftRegularGraph& graph, const std::vector<std::size_t>& support);

}  // namespace shofa

#endif
