#include "shofa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shofa {

namespace {

// Solves min ||A_S v - y|| restricted to the support columns via normal
// equations with Gaussian elimination; systems are at most 3x3.
bool least_squares(const std::vector<std::vector<double>>& matrix, const std::vector<double>& y,
                   const std::vector<std::size_t>& support, std::vector<double>& out) {
    const std::size_t kk = support.size();
    std::vector<std::vector<double>> ata(kk, std::vector<double>(kk, 0.0));
    std::vector<double> aty(kk, 0.0);
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        for (std::size_t a = 0; a < kk; ++a) {
            const double va = matrix[r][support[a]];
            if (va == 0.0) continue;
            aty[a] += va * y[r];
            for (std::size_t b = 0; b < kk; ++b) ata[a][b] += va * matrix[r][support[b]];
        }
    }
    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> perm(kk);
    for (std::size_t i = 0; i < kk; ++i) perm[i] = i;
    for (std::size_t col = 0; col < kk; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < kk; ++r)
            if (std::abs(ata[r][col]) > std::abs(ata[piv][col])) piv = r;
        if (std::abs(ata[piv][col]) < 1e-12) return false;  // singular restriction
        std::swap(ata[col], ata[piv]);
        std::swap(aty[col], aty[piv]);
        for (std::size_t r = col + 1; r < kk; ++r) {
            const double f = ata[r][col] / ata[col][col];
            for (std::size_t c = col; c < kk; ++c) ata[r][c] -= f * ata[col][c];
            aty[r] -= f * aty[col];
        }
    }
    out.assign(kk, 0.0);
    for (std::size_t col = kk; col-- > 0;) {
        double s = aty[col];
        for (std::size_t c = col + 1; c < kk; ++c) s -= ata[col][c] * out[c];
        out[col] = s / ata[col][col];
    }
    return true;
}

double full_residual(const std::vector<std::vector<double>>& matrix, const std::vector<double>& y,
                     const std::vector<std::size_t>& support, const std::vector<double>& vals) {
    double worst = 0.0;
    for (std::size_t r = 0; r < matrix.size(); ++r) {
        double pred = 0.0;
        for (std::size_t a = 0; a < support.size(); ++a) pred += matrix[r][support[a]] * vals[a];
        worst = std::max(worst, std::abs(y[r] - pred));
    }
    return worst;
}

}  // namespace

OracleResult brute_force_decode(const std::vector<std::vector<double>>& matrix,
                                const std::vector<double>& y, std::size_t k_max) {
    if (matrix.empty()) throw std::invalid_argument("brute_force_decode: empty matrix");
    const std::size_t n = matrix[0].size();
    if (n > 16 || k_max > 3)
        throw std::invalid_argument("brute_force_decode: enumeration budget exceeded");
    if (y.size() != matrix.size())
        throw std::invalid_argument("brute_force_decode: dimension mismatch");

    double linf = 0.0;
    for (const double v : y) linf = std::max(linf, std::abs(v));
    const double tol = 1e-8 * std::max(1.0, linf);

    OracleResult result;
    auto consider = [&](const std::vector<std::size_t>& support) {
        std::vector<double> vals;
        if (!support.empty() && !least_squares(matrix, y, support, vals)) return;
        if (full_residual(matrix, y, support, vals) > tol) return;
        SparseVector sol;
        sol.length = n;
        for (std::size_t a = 0; a < support.size(); ++a)
            if (std::abs(vals[a]) > tol) sol.entries.emplace_back(support[a], vals[a]);
        std::sort(sol.entries.begin(), sol.entries.end());
        // Distinct-solution filter: supersets of an already found support
        // reproduce the same signal with padding zeros.
        for (const auto& seen : result.solutions) {
            if (seen.entries.size() != sol.entries.size()) continue;
            bool same = true;
            for (std::size_t a = 0; a < sol.entries.size() && same; ++a)
                same = seen.entries[a].first == sol.entries[a].first &&
                       std::abs(seen.entries[a].second - sol.entries[a].second) <= 1e-6;
            if (same) return;
        }
        result.solutions.push_back(std::move(sol));
    };

    std::vector<std::size_t> support;
    consider(support);  // the all-zero candidate
    for (std::size_t sz = 1; sz <= k_max && sz <= n; ++sz) {
        support.assign(sz, 0);
        for (std::size_t a = 0; a < sz; ++a) support[a] = a;
        for (;;) {
            consider(support);
            // next combination
            std::size_t a = sz;
            while (a > 0 && support[a - 1] == n - sz + (a - 1)) --a;
            if (a == 0) break;
            ++support[a - 1];
            for (std::size_t b = a; b < sz; ++b) support[b] = support[b - 1] + 1;
        }
    }
    result.unique = result.solutions.size() == 1;
    return result;
}

OracleResult brute_force_decode(const ExactEnsemble& ens, const MeasurementVector& y,
                                std::size_t k_max) {
    const std::size_t n = ens.graph().n_left();
    const std::size_t rows = ens.rows();
    std::vector<std::vector<double>> matrix(2 * rows, std::vector<double>(n, 0.0));
    const auto& g = ens.graph();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t t = 0; t < g.degree(); ++t) {
            const std::size_t i = g.neighbors(j)[t];
            const std::size_t e = j * g.degree() + t;
            if (ens.mode() == MatrixMode::Split) {
                matrix[4 * i][j] = ens.ident_weight(e).real();
                matrix[4 * i + 1][j] = ens.ident_weight(e).imag();
                matrix[4 * i + 2][j] = ens.verif_weight(e).real();
                matrix[4 * i + 3][j] = ens.verif_weight(e).imag();
            } else {
                matrix[2 * i][j] = ens.ident_weight(e).real();
                matrix[2 * i + 1][j] = ens.ident_weight(e).imag();
            }
        }
    std::vector<double> yr(2 * rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t row = ens.mode() == MatrixMode::Split
                                    ? (r % 2 == 0 ? 4 * (r / 2) : 4 * (r / 2) + 2)
                                    : 2 * r;
        yr[row] = y[r].real();
        yr[row + 1] = y[r].imag();
    }
    return brute_force_decode(matrix, yr, k_max);
}

bool brute_2core_empty(const LeftRegularGraph& graph, const std::vector<std::size_t>& support) {
    if (support.size() > 12 || graph.n_right() > 24)
        throw std::invalid_argument("brute_2core_empty: enumeration budget exceeded");
    const std::size_t s = support.size();
    for (std::uint64_t mask = 1; mask < (1ULL << s); ++mask) {
        std::vector<std::size_t> hits(graph.n_right(), 0);
        for (std::size_t t = 0; t < s; ++t) {
            if (!((mask >> t) & 1ULL)) continue;
            for (std::size_t e = 0; e < graph.degree(); ++e)
                ++hits[graph.neighbors(support[t])[e]];
        }
        bool witness = true;
        for (std::size_t r = 0; r < graph.n_right() && witness; ++r)
            if (hits[r] == 1) witness = false;
        if (witness) return false;  // this subset is (part of) a 2-core
    }
    return true;
}

}  // namespace shofa
