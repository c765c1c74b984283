// Phase-encoded sparse measurement codec for exactly k-sparse signals:
// matrix construction, O(d*nnz) encoding, O(d) streaming update, peeling
// decode, and constant-time single-component queries.
#ifndef SHOFA_CODEC_EXACT_HPP
#define SHOFA_CODEC_EXACT_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shofa/graph.hpp"
#include "shofa/signal.hpp"

namespace shofa {

using MeasurementVector = std::vector<std::complex<double>>;

enum class MatrixMode { Split, Combined };

// Split: right node i owns rows 2i (identification) and 2i+1 (verification).
// Identification phases follow j*pi/(2n); verification phases are i.i.d.
// uniform on a grid of grid_levels values in [0, pi/2).
// Combined: one row per right node; each edge phase is j*pi/(2n) plus a
// random sub-step offset r*pi/(2n*grid_levels), so the structured bits name
// j and the offset bits stand in for verification.
class ExactEnsemble {
  public:
    // grid_levels = 0 picks max(4096, m'^3) verification levels for Split
    // (callers that know the target sparsity should pass max(4096, k^3))
    // and 4096 offset levels for Combined.
    static ExactEnsemble build(const LeftRegularGraph& graph, MatrixMode mode,
                               std::uint64_t seed, std::uint64_t grid_levels = 0);
    // Explicit per-edge phases, indexed like edge_index(); used by the
    // deserializer and by tests with hand-picked matrices.
    static ExactEnsemble with_phases(LeftRegularGraph graph, MatrixMode mode,
                                     std::uint64_t grid_levels, std::vector<double> ident_phase,
                                     std::vector<double> verif_phase);

    const LeftRegularGraph& graph() const { return graph_; }
    MatrixMode mode() const { return mode_; }
    std::uint64_t grid_levels() const { return grid_v_; }
    std::size_t rows() const {
        return mode_ == MatrixMode::Split ? 2 * graph_.n_right() : graph_.n_right();
    }

    std::size_t edge_index(std::size_t left, std::size_t right) const {
        return left * graph_.degree() + graph_.edge_slot(left, right);
    }
    double ident_phase(std::size_t edge) const { return ident_phase_[edge]; }
    double verif_phase(std::size_t edge) const { return verif_phase_[edge]; }
    std::complex<double> ident_weight(std::size_t edge) const { return ident_w_[edge]; }
    std::complex<double> verif_weight(std::size_t edge) const { return verif_w_[edge]; }

  private:
    LeftRegularGraph graph_;
    MatrixMode mode_ = MatrixMode::Split;
    std::uint64_t grid_v_ = 0;
    // Indexed by left*degree + slot. Combined mode uses only the ident table.
    std::vector<double> ident_phase_, verif_phase_;
    std::vector<std::complex<double>> ident_w_, verif_w_;
};

enum class DecodeStatus { Success, StuckCore, VerificationAnomaly, IterationCap };

struct DecodeReport {
    SparseVector xhat;
    DecodeStatus status = DecodeStatus::StuckCore;
    std::size_t iterations = 0;      // productive (value-assigning) iterations
    double residual_linf = 0.0;      // max residual magnitude at termination
    std::uint64_t counted_ops = 0;   // instrumented arithmetic steps
};

// y = A x, computed edge-wise. `ops` (optional) receives the number of edge
// operations: d * nnz(x) for sparse input, d * n for dense.
MeasurementVector encode(const ExactEnsemble& ens, const SparseVector& x,
                         std::uint64_t* ops = nullptr);
MeasurementVector encode(const ExactEnsemble& ens, const std::vector<double>& x,
                         std::uint64_t* ops = nullptr);

// Returns y adjusted for x[j] += delta, touching the d (Split: 2d) affected
// rows. `ops` receives the affected row count.
MeasurementVector update(const ExactEnsemble& ens, const MeasurementVector& y, std::size_t j,
                         double delta, std::uint64_t* ops = nullptr);

// Peeling reconstruction. iter_cap == 0 selects 2*m' + 16; callers that know
// the sparsity should pass 2k + 16.
DecodeReport decode(const ExactEnsemble& ens, const MeasurementVector& y, std::uint64_t seed,
                    std::size_t iter_cap = 0);

// Constant-time single-component reconstruction (at most d right-node
// inspections): engaged value on Answered, std::nullopt on Declined.
std::optional<double> query(const ExactEnsemble& ens, const MeasurementVector& y, std::size_t j);

// Text round-trip: graph in the module format, then one "i j ident verif"
// line per edge (verif column carries the offset part in Combined mode).
void save_exact_ensemble(const std::string& graph_path, const std::string& phase_path,
                         const ExactEnsemble& ens);
ExactEnsemble load_exact_ensemble(const std::string& graph_path, const std::string& phase_path);
void save_measurements(const std::string& path, const MeasurementVector& y);
MeasurementVector load_measurements(const std::string& path);

namespace detail {

struct LeafHit {
    std::size_t j;
    double value;
};

// Leaf probe for right node i against residual rows (Split: uI, uV;
// Combined: uI only). zero_tol marks "numerically zero" magnitudes and
// verif_tol bounds the verification mismatch. Used by decode, query, and
// the false-verification tests.
std::optional<LeafHit> probe_leaf(const ExactEnsemble& ens, std::size_t i,
                                  std::complex<double> uI, std::complex<double> uV,
                                  double zero_tol, double verif_tol);

}  // namespace detail

}  // namespace shofa

#endif
