// Experiment harness: seeded trial runner, grid sweeps with deterministic
// per-trial seed derivation, config-file parsing, bisection search for
// minimal measurement counts, and CSV emission.
#ifndef SHOFA_HARNESS_HPP
#define SHOFA_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "shofa/codec_exact.hpp"

namespace shofa {

enum class CodecKind { Exact, Noisy, Int };
enum class CriterionKind { ExactRecovery, RelativeL1 };
enum class ValueKind { One, PlusMinusOne };

struct TrialConfig {
    CodecKind codec = CodecKind::Exact;
    std::size_t n = 1000;
    std::size_t k = 50;
    std::size_t m_prime = 100;  // right nodes; total rows follow from codec/mode
    std::size_t d = 3;
    std::size_t gamma = 0;  // Noisy digit count; 0 = derive from the noise level
    std::uint32_t M = 16;   // Int alphabet size
    std::size_t R = 2;      // Int vector length
    MatrixMode mode = MatrixMode::Combined;
    double sigma_z = 0.0;
    double sigma_e = 0.0;
    double delta_override = 0.0;  // Noisy truncation parameter; 0 = default rule
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    CriterionKind criterion = CriterionKind::ExactRecovery;
    double criterion_tol = 1e-9;
    ValueKind values = ValueKind::One;

    std::size_t rows() const;                  // the "m" column of the CSV
    void set_rows(std::size_t m);              // derive m_prime from total rows
    void validate() const;                     // throws std::invalid_argument
    std::size_t resolved_gamma() const;        // after the default rule
    double resolved_delta() const;
};

struct TrialRecord {
    bool success = false;
    std::size_t iterations = 0;
    double rel_l1 = 0.0;
    DecodeStatus status = DecodeStatus::StuckCore;
};

// Runs one seeded trial: per-trial seed = derive(cfg.seed, trial_index),
// then graph, ensemble, signal, noise, encode, decode, criterion.
TrialRecord run_trial(const TrialConfig& cfg, std::size_t trial_index);

struct SweepResult {
    TrialConfig cfg;  // with resolved gamma/delta recorded back
    double success_fraction = 0.0;
    double mean_iterations = 0.0;
    double mean_rel_l1 = 0.0;
    double wall_ms = 0.0;
};

// Trials of one grid point, optionally across threads. Records are
// aggregated in trial order, so the thread count never changes the result.
SweepResult run_grid_point(const TrialConfig& cfg, unsigned threads = 1);

// One result row per grid point, in the given order.
std::vector<SweepResult> sweep(const std::vector<TrialConfig>& grid, unsigned threads = 1);

// Smallest total-row count m in [lo, hi] whose success fraction reaches
// `target` (monotone bisection; returns hi+1 when even hi misses the target).
std::size_t bisect_min_rows(TrialConfig base, double target, std::size_t lo, std::size_t hi,
                            unsigned threads = 1);

// CSV schema (header exact):
// codec,n,k,m,d,gamma,M,R,mode,sigma_z,sigma_e,trials,seed,success_fraction,
// mean_iterations,mean_rel_l1,wall_ms
void write_csv(std::ostream& os, const std::vector<SweepResult>& results);

// Key = value config text with one optional grid axis
// ("sweep <key> <start> <stop> <steps> [log]") and optional bisection block
// (bisect_target / bisect_lo / bisect_hi, in total-row units).
struct SweepSpec {
    std::vector<TrialConfig> grid;
    double bisect_target = 0.0;  // > 0 switches every grid point to bisection
    std::size_t bisect_lo = 0;
    std::size_t bisect_hi = 0;
};

SweepSpec parse_config(std::istream& is);
SweepSpec load_config(const std::string& path);

}  // namespace shofa

#endif
