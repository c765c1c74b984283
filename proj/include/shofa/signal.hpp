// Sparse test-signal generation, Gaussian signal tails, and error metrics.
#ifndef SHOFA_SIGNAL_HPP
#define SHOFA_SIGNAL_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace shofa {

// Length-n real signal stored as (index, value) pairs.
// Indices strictly increasing, values never exactly zero.
struct SparseVector {
    std::size_t length = 0;
    std::vector<std::pair<std::size_t, double>> entries;

    std::size_t nnz() const { return entries.size(); }
    std::vector<double> dense() const;
    bool valid() const;
};

// Noise model: sigma_z is the std-dev of the Gaussian signal tail (off-support
// entries), sigma_e the per-axis std-dev of complex measurement noise.
// (0, 0) is the exact model.
struct NoiseSpec {
    double sigma_z = 0.0;
    double sigma_e = 0.0;
};

// Distribution of the nonzero values of generated signals. None of the
// variants can emit an exact 0.
struct ValueDist {
    enum class Kind { Constant, Uniform, Gaussian, PlusMinusOne };
    Kind kind = Kind::Constant;
    double a = 1.0;  // Constant: value. Uniform: low. Gaussian: mean.
    double b = 1.0;  // Uniform: high. Gaussian: std-dev.

    static ValueDist constant(double v) { return {Kind::Constant, v, 0.0}; }
    static ValueDist uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
    static ValueDist gaussian(double mean, double sd) { return {Kind::Gaussian, mean, sd}; }
    static ValueDist plus_minus_one() { return {Kind::PlusMinusOne, 0.0, 0.0}; }
};

// Exactly k nonzeros at uniformly chosen distinct indices; deterministic per seed.
// Throws std::invalid_argument if k > n or the distribution can emit 0.
SparseVector make_sparse_signal(std::size_t n, std::size_t k, const ValueDist& dist,
                                std::uint64_t seed);

// Returns x + z where z has i.i.d. N(0, sigma_z^2) entries exactly on the
// complement of support(x) and zeros on support(x).
std::vector<double> add_tail(const SparseVector& x, const NoiseSpec& spec, std::uint64_t seed);

// ||x - xhat||_1 / ||x||_1. Returns 0 when both are all-zero; throws
// std::domain_error when x is all-zero but xhat is not.
double relative_l1_error(const std::vector<double>& x, const std::vector<double>& xhat);
double relative_l1_error(const SparseVector& x, const SparseVector& xhat);
double relative_l1_error(const std::vector<double>& x, const SparseVector& xhat);

}  // namespace shofa

#endif
