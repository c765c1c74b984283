#include "shofa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "shofa/codec_int.hpp"
#include "shofa/codec_noisy.hpp"
#include "shofa/graph.hpp"
#include "shofa/rng.hpp"
#include "shofa/signal.hpp"

namespace shofa {

std::size_t TrialConfig::rows() const {
    switch (codec) {
        case CodecKind::Exact:
            return mode == MatrixMode::Split ? 2 * m_prime : m_prime;
        case CodecKind::Noisy:
            return 2 * resolved_gamma() * m_prime;
        case CodecKind::Int:
            return 2 * R * m_prime;
    }
    return m_prime;
}

void TrialConfig::set_rows(std::size_t m) {
    std::size_t per = 1;
    switch (codec) {
        case CodecKind::Exact:
            per = mode == MatrixMode::Split ? 2 : 1;
            break;
        case CodecKind::Noisy:
            if (gamma == 0)
                throw std::invalid_argument(
                    "config: total rows m needs an explicit gamma for the noisy codec; "
                    "set gamma or use m_prime");
            per = 2 * gamma;
            break;
        case CodecKind::Int:
            per = 2 * R;
            break;
    }
    if (m % per != 0) throw std::invalid_argument("config: m not divisible by rows per node");
    m_prime = m / per;
}

std::size_t TrialConfig::resolved_gamma() const {
    if (codec != CodecKind::Noisy || gamma > 0) return gamma;
    const double c = static_cast<double>(m_prime) / static_cast<double>(std::max<std::size_t>(1, k));
    return default_gamma(n, k, c, d, sigma_z, sigma_e, resolved_delta());
}

double TrialConfig::resolved_delta() const {
    if (delta_override > 0.0) return delta_override;
    if (k == 0) return 1.0;  // nothing to recover; any positive threshold works
    const double c = static_cast<double>(m_prime) / static_cast<double>(k);
    return default_delta(k, n, c, d, sigma_z, sigma_e);
}

void TrialConfig::validate() const {
    if (k > n) throw std::invalid_argument("config: k > n");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (d < 3) throw std::invalid_argument("config: d must be >= 3");
    if (d > m_prime) throw std::invalid_argument("config: d exceeds m_prime");
    if (sigma_z < 0.0 || sigma_e < 0.0) throw std::invalid_argument("config: negative sigma");
    if (codec == CodecKind::Noisy) {
        const std::size_t g = resolved_gamma();
        if (g < 1 || (static_cast<std::size_t>(1) << g) > n)
            throw std::invalid_argument("config: gamma out of range for n");
    }
    if (codec == CodecKind::Int) {
        if (M < 2 || R < 1) throw std::invalid_argument("config: bad M/R");
    }
    if (codec != CodecKind::Noisy && (sigma_z > 0.0 || sigma_e > 0.0))
        throw std::invalid_argument("config: noise requires the noisy codec");
}

namespace {

ValueDist value_dist(ValueKind kind) {
    return kind == ValueKind::One ? ValueDist::constant(1.0) : ValueDist::plus_minus_one();
}

std::uint64_t split_grid_levels(std::size_t k) {
    const double cube = static_cast<double>(k) * static_cast<double>(k) * static_cast<double>(k);
    return std::max<std::uint64_t>(4096, static_cast<std::uint64_t>(std::min(cube, 0x1.0p40)));
}

}  // namespace

TrialRecord run_trial(const TrialConfig& cfg, std::size_t trial_index) {
    cfg.validate();
    const std::uint64_t ts = derive_seed(cfg.seed, trial_index);
    const std::uint64_t graph_seed = derive_seed(ts, 1);
    const std::uint64_t ens_seed = derive_seed(ts, 2);
    const std::uint64_t signal_seed = derive_seed(ts, 3);
    const std::uint64_t tail_seed = derive_seed(ts, 4);
    const std::uint64_t enoise_seed = derive_seed(ts, 5);
    const std::uint64_t decode_seed = derive_seed(ts, 6);

    const LeftRegularGraph graph = sample_graph(cfg.n, cfg.m_prime, cfg.d, graph_seed);
    const SparseVector x = make_sparse_signal(cfg.n, cfg.k, value_dist(cfg.values), signal_seed);

    TrialRecord rec;
    DecodeReport report;
    switch (cfg.codec) {
        case CodecKind::Exact: {
            const std::uint64_t levels =
                cfg.mode == MatrixMode::Split ? split_grid_levels(cfg.k) : 4096;
            const ExactEnsemble ens = ExactEnsemble::build(graph, cfg.mode, ens_seed, levels);
            const MeasurementVector y = encode(ens, x);
            report = decode(ens, y, decode_seed, 2 * cfg.k + 16);
            break;
        }
        case CodecKind::Noisy: {
            const NoisyEnsemble ens =
                NoisyEnsemble::build(graph, cfg.resolved_gamma(), ens_seed);
            const std::vector<double> xz = add_tail(x, {cfg.sigma_z, 0.0}, tail_seed);
            const MeasurementVector y =
                encode_noisy(ens, xz, {0.0, cfg.sigma_e}, enoise_seed);
            report = decode_noisy(ens, y, {cfg.resolved_delta()}, cfg.k, decode_seed,
                                  4 * cfg.k);
            break;
        }
        case CodecKind::Int: {
            const IntEnsemble ens = IntEnsemble::build(graph, cfg.M, cfg.R, ens_seed);
            const std::vector<double> y = encode_int(ens, x);
            report = decode_int(ens, y, decode_seed, 2 * cfg.k + 16);
            break;
        }
    }

    rec.iterations = report.iterations;
    rec.status = report.status;
    rec.rel_l1 = relative_l1_error(x, report.xhat);
    switch (cfg.criterion) {
        case CriterionKind::ExactRecovery:
            rec.success = report.status == DecodeStatus::Success &&
                          rec.rel_l1 <= cfg.criterion_tol;
            break;
        case CriterionKind::RelativeL1:
            rec.success = rec.rel_l1 <= cfg.criterion_tol;
            break;
    }
    return rec;
}

SweepResult run_grid_point(const TrialConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialRecord> records(cfg.trials);

    if (threads <= 1 || cfg.trials == 1) {
        for (std::size_t t = 0; t < cfg.trials; ++t) records[t] = run_trial(cfg, t);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= cfg.trials) return;
                records[t] = run_trial(cfg, t);
            }
        };
        std::vector<std::thread> pool;
        const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials));
        pool.reserve(count);
        for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SweepResult out;
    out.cfg = cfg;
    if (cfg.codec == CodecKind::Noisy) {
        out.cfg.gamma = cfg.resolved_gamma();
        out.cfg.delta_override = cfg.resolved_delta();
    }
    std::size_t successes = 0;
    double iter_sum = 0.0, rel_sum = 0.0;
    for (const auto& rec : records) {
        successes += rec.success ? 1 : 0;
        iter_sum += static_cast<double>(rec.iterations);
        rel_sum += rec.rel_l1;
    }
    out.success_fraction = static_cast<double>(successes) / static_cast<double>(cfg.trials);
    out.mean_iterations = iter_sum / static_cast<double>(cfg.trials);
    out.mean_rel_l1 = rel_sum / static_cast<double>(cfg.trials);
    out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    return out;
}

std::vector<SweepResult> sweep(const std::vector<TrialConfig>& grid, unsigned threads) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (const auto& cfg : grid) cfg.validate();
    std::vector<SweepResult> results;
    results.reserve(grid.size());
    for (const auto& cfg : grid) results.push_back(run_grid_point(cfg, threads));
    return results;
}

std::size_t bisect_min_rows(TrialConfig base, double target, std::size_t lo, std::size_t hi,
                            unsigned threads) {
    if (lo > hi) throw std::invalid_argument("bisect_min_rows: bad range");
    auto fraction_at = [&](std::size_t m) {
        TrialConfig cfg = base;
        cfg.set_rows(m);
        return run_grid_point(cfg, threads).success_fraction;
    };
    if (fraction_at(hi) < target) return hi + 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (fraction_at(mid) >= target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

namespace {

const char* codec_name(CodecKind c) {
    switch (c) {
        case CodecKind::Exact:
            return "exact";
        case CodecKind::Noisy:
            return "noisy";
        case CodecKind::Int:
            return "int";
    }
    return "?";
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepResult>& results) {
    os << "codec,n,k,m,d,gamma,M,R,mode,sigma_z,sigma_e,trials,seed,success_fraction,"
          "mean_iterations,mean_rel_l1,wall_ms\n";
    for (const auto& r : results) {
        const TrialConfig& c = r.cfg;
        os << codec_name(c.codec) << ',' << c.n << ',' << c.k << ',' << c.rows() << ',' << c.d
           << ',' << (c.codec == CodecKind::Noisy ? c.gamma : 0) << ','
           << (c.codec == CodecKind::Int ? c.M : 0) << ','
           << (c.codec == CodecKind::Int ? c.R : 0) << ','
           << (c.mode == MatrixMode::Split ? "split" : "combined") << ',' << fmt(c.sigma_z)
           << ',' << fmt(c.sigma_e) << ',' << c.trials << ',' << c.seed << ','
           << fmt(r.success_fraction) << ',' << fmt(r.mean_iterations) << ','
           << fmt(r.mean_rel_l1) << ',' << std::fixed << std::setprecision(3) << r.wall_ms
           << '\n';
        os.unsetf(std::ios_base::floatfield);
    }
}

namespace {

struct SweepAxis {
    std::string key;
    double start = 0.0, stop = 0.0;
    std::size_t steps = 1;
    bool log = false;
};

bool is_integer_key(const std::string& key) {
    return key == "n" || key == "k" || key == "m" || key == "m_prime" || key == "d" ||
           key == "gamma" || key == "M" || key == "R" || key == "trials";
}

void apply_key(TrialConfig& cfg, bool& rows_given, std::size_t& rows_value,
               const std::string& key, const std::string& value) {
    auto to_u = [&](const std::string& s) {
        return static_cast<std::size_t>(std::stoull(s));
    };
    if (key == "codec") {
        if (value == "exact")
            cfg.codec = CodecKind::Exact;
        else if (value == "noisy")
            cfg.codec = CodecKind::Noisy;
        else if (value == "int")
            cfg.codec = CodecKind::Int;
        else
            throw std::invalid_argument("config: unknown codec " + value);
    } else if (key == "n") {
        cfg.n = to_u(value);
    } else if (key == "k") {
        cfg.k = to_u(value);
    } else if (key == "m") {
        rows_given = true;
        rows_value = to_u(value);
    } else if (key == "m_prime") {
        cfg.m_prime = to_u(value);
    } else if (key == "d") {
        cfg.d = to_u(value);
    } else if (key == "gamma") {
        cfg.gamma = to_u(value);
    } else if (key == "M") {
        cfg.M = static_cast<std::uint32_t>(to_u(value));
    } else if (key == "R") {
        cfg.R = to_u(value);
    } else if (key == "mode") {
        if (value == "split")
            cfg.mode = MatrixMode::Split;
        else if (value == "combined")
            cfg.mode = MatrixMode::Combined;
        else
            throw std::invalid_argument("config: unknown mode " + value);
    } else if (key == "sigma_z") {
        cfg.sigma_z = std::stod(value);
    } else if (key == "sigma_e") {
        cfg.sigma_e = std::stod(value);
    } else if (key == "delta") {
        cfg.delta_override = std::stod(value);
    } else if (key == "trials") {
        cfg.trials = to_u(value);
    } else if (key == "seed") {
        cfg.seed = std::stoull(value);
    } else if (key == "values") {
        if (value == "one")
            cfg.values = ValueKind::One;
        else if (value == "pm1")
            cfg.values = ValueKind::PlusMinusOne;
        else
            throw std::invalid_argument("config: unknown values " + value);
    } else {
        throw std::invalid_argument("config: unknown key " + key);
    }
}

}  // namespace

SweepSpec parse_config(std::istream& is) {
    TrialConfig base;
    bool rows_given = false;
    std::size_t rows_value = 0;
    SweepAxis axis;
    bool has_axis = false;
    SweepSpec spec;
    std::string crit_kind;
    double crit_tol = 0.0;
    bool has_crit = false;

    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;

        if (first == "sweep") {
            if (has_axis) throw std::invalid_argument("config: multiple sweep axes");
            std::string log_word;
            if (!(ls >> axis.key >> axis.start >> axis.stop >> axis.steps))
                throw std::invalid_argument("config: malformed sweep line");
            if (ls >> log_word) {
                if (log_word != "log") throw std::invalid_argument("config: bad sweep flag");
                axis.log = true;
            }
            if (axis.steps < 1) throw std::invalid_argument("config: sweep needs steps >= 1");
            has_axis = true;
            continue;
        }
        if (first == "criterion") {
            if (!(ls >> crit_kind >> crit_tol))
                throw std::invalid_argument("config: malformed criterion line");
            has_crit = true;
            continue;
        }

        std::string eq, value;
        if (!(ls >> eq >> value) || eq != "=")
            throw std::invalid_argument("config: expected 'key = value', got: " + line);
        if (first == "bisect_target") {
            spec.bisect_target = std::stod(value);
        } else if (first == "bisect_lo") {
            spec.bisect_lo = std::stoull(value);
        } else if (first == "bisect_hi") {
            spec.bisect_hi = std::stoull(value);
        } else {
            apply_key(base, rows_given, rows_value, first, value);
        }
    }

    if (has_crit) {
        if (crit_kind == "exact") {
            base.criterion = CriterionKind::ExactRecovery;
        } else if (crit_kind == "rel_l1") {
            base.criterion = CriterionKind::RelativeL1;
        } else {
            throw std::invalid_argument("config: unknown criterion " + crit_kind);
        }
        base.criterion_tol = crit_tol;
    }

    auto finish = [&](TrialConfig cfg, bool rg, std::size_t rv) {
        if (rg) cfg.set_rows(rv);
        return cfg;
    };

    if (!has_axis) {
        spec.grid.push_back(finish(base, rows_given, rows_value));
        return spec;
    }

    for (std::size_t i = 0; i < axis.steps; ++i) {
        double v;
        if (axis.steps == 1) {
            v = axis.start;
        } else if (axis.log) {
            const double t = static_cast<double>(i) / static_cast<double>(axis.steps - 1);
            v = axis.start * std::pow(axis.stop / axis.start, t);
        } else {
            v = axis.start + (axis.stop - axis.start) * static_cast<double>(i) /
                                 static_cast<double>(axis.steps - 1);
        }
        TrialConfig cfg = base;
        bool rg = rows_given;
        std::size_t rv = rows_value;
        std::ostringstream val;
        if (is_integer_key(axis.key))
            val << static_cast<std::size_t>(std::llround(v));
        else
            val << std::setprecision(17) << v;
        apply_key(cfg, rg, rv, axis.key, val.str());
        spec.grid.push_back(finish(cfg, rg, rv));
    }
    return spec;
}

SweepSpec load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_config: cannot open " + path);
    return parse_config(is);
}

}  // namespace shofa
