// Noise-robust variant: each right node carries Gamma identification and
// Gamma verification rows; indices are recovered one base-|B| digit per row
// through quantized phases, which widens the per-digit noise margin.
#ifndef SHOFA_CODEC_NOISY_HPP
#define SHOFA_CODEC_NOISY_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "shofa/codec_exact.hpp"
#include "shofa/graph.hpp"
#include "shofa/signal.hpp"

namespace shofa {

// Row group for right node i: rows [i*2G, i*2G+G) identification (digit
// gamma ascending, most significant first), rows [i*2G+G, i*2G+2G)
// verification.
class NoisyEnsemble {
  public:
    // base = ceil(n^(1/Gamma)); requires Gamma >= 1 and n >= 2^Gamma.
    static NoisyEnsemble build(const LeftRegularGraph& graph, std::size_t gamma,
                               std::uint64_t seed);

    const LeftRegularGraph& graph() const { return graph_; }
    std::size_t gamma() const { return gamma_; }
    std::size_t base_size() const { return base_; }
    std::size_t rows() const { return 2 * gamma_ * graph_.n_right(); }

    std::size_t edge_index(std::size_t left, std::size_t right) const {
        return left * graph_.degree() + graph_.edge_slot(left, right);
    }
    double ident_phase(std::size_t edge, std::size_t g) const {
        return phase_step_ * static_cast<double>(ident_digit_[edge * gamma_ + g]);
    }
    std::uint32_t ident_digit(std::size_t edge, std::size_t g) const {
        return ident_digit_[edge * gamma_ + g];
    }
    std::uint32_t verif_digit(std::size_t edge, std::size_t g) const {
        return verif_digit_[edge * gamma_ + g];
    }
    std::complex<double> ident_weight(std::size_t edge, std::size_t g) const {
        return ident_w_[edge * gamma_ + g];
    }
    std::complex<double> verif_weight(std::size_t edge, std::size_t g) const {
        return verif_w_[edge * gamma_ + g];
    }
    double phase_step() const { return phase_step_; }  // pi / (2(|B|-1))

  private:
    LeftRegularGraph graph_;
    std::size_t gamma_ = 1;
    std::size_t base_ = 2;
    double phase_step_ = 0.0;
    std::vector<std::uint32_t> ident_digit_, verif_digit_;  // edges * gamma
    std::vector<std::complex<double>> ident_w_, verif_w_;
};

// Entries below delta/k are left to the truncation set and not recovered.
struct TruncationPolicy {
    double delta = 0.0;
};

// Base-|B| representation of j, most significant digit first; j < base^gamma.
std::vector<std::uint32_t> digits(std::size_t j, std::size_t gamma, std::size_t base_size);
std::size_t digits_to_index(const std::vector<std::uint32_t>& g, std::size_t base_size);

// digit = round(2(|B|-1) * (angle mod pi) / pi) wrapped and clamped to
// [0, |B|-1]; returns (digit, digit * pi/(2(|B|-1))).
std::pair<std::uint32_t, double> quantize_phase(double angle, std::size_t base_size);

// y = A(x_plus_z) + e with i.i.d. complex Gaussian noise of per-axis std-dev
// e_spec.sigma_e on every row.
MeasurementVector encode_noisy(const NoisyEnsemble& ens, const std::vector<double>& x_plus_z,
                               const NoiseSpec& e_spec, std::uint64_t seed);

// Quantized-phase peeling decode. k is the sparsity budget the caller
// designed for (it scales the delta/k magnitude threshold and the default
// iteration cap of 4k). Every loop pass counts as one iteration.
// average_magnitudes switches the value estimate from the first
// identification row to the mean across all Gamma rows.
DecodeReport decode_noisy(const NoisyEnsemble& ens, const MeasurementVector& y,
                          const TruncationPolicy& policy, std::size_t k, std::uint64_t seed,
                          std::size_t iter_cap = 0, bool average_magnitudes = false);

// Closed-form "almost bounded phase noise" values for a leaf measurement:
// expected displacement bound sqrt(2 pi k^2 (d n sigma_z^2 / (c k) +
// sigma_e^2) / delta^2) and tail probability  e^(-alpha^2/(2 pi)) / 2.
std::pair<double, double> phase_noise_bound(double delta, double k, double n, double c, double d,
                                            double sigma_z, double sigma_e, double alpha);

// Design helpers for picking the un-instantiated code parameters.
// default_delta: ten standard deviations of a single measurement's noise,
// scaled by k. default_gamma: smallest Gamma whose quantization margin
// pi/(4(|B|-1)) dominates the expected phase-noise bound at threshold
// magnitude delta/k (capped so that n >= 2^Gamma).
double default_delta(std::size_t k, std::size_t n, double c, std::size_t d, double sigma_z,
                     double sigma_e);
std::size_t default_gamma(std::size_t n, std::size_t k, double c, std::size_t d, double sigma_z,
                          double sigma_e, double delta);

namespace detail {

// Leaf probe on one right-node group of residual rows; rows points at the
// 2*Gamma consecutive residual entries of the group.
std::optional<LeafHit> probe_leaf_noisy(const NoisyEnsemble& ens, std::size_t i,
                                        const std::complex<double>* rows, double threshold,
                                        bool average_magnitudes);

}  // namespace detail

}  // namespace shofa

#endif
