#include "shofa/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "shofa/rng.hpp"

namespace shofa {

std::vector<double> SparseVector::dense() const {
    std::vector<double> out(length, 0.0);
    for (const auto& [j, v] : entries) out[j] = v;
    return out;
}

bool SparseVector::valid() const {
    if (entries.size() > length) return false;
    std::size_t prev = 0;
    bool first = true;
    for (const auto& [j, v] : entries) {
        if (j >= length || v == 0.0) return false;
        if (!first && j <= prev) return false;
        prev = j;
        first = false;
    }
    return true;
}

namespace {

double draw_value(const ValueDist& dist, Rng& rng) {
    switch (dist.kind) {
        case ValueDist::Kind::Constant:
            return dist.a;
        case ValueDist::Kind::Uniform: {
            double v;
            do {
                v = dist.a + (dist.b - dist.a) * rng.next_double();
            } while (v == 0.0);
            return v;
        }
        case ValueDist::Kind::Gaussian: {
            double v;
            do {
                v = dist.a + dist.b * rng.next_normal();
            } while (v == 0.0);
            return v;
        }
        case ValueDist::Kind::PlusMinusOne:
            return (rng.next_u64() & 1) ? 1.0 : -1.0;
    }
    return 1.0;
}

}  // namespace

SparseVector make_sparse_signal(std::size_t n, std::size_t k, const ValueDist& dist,
                                std::uint64_t seed) {
    if (k > n) throw std::invalid_argument("make_sparse_signal: k > n");
    if (dist.kind == ValueDist::Kind::Constant && dist.a == 0.0)
        throw std::invalid_argument("make_sparse_signal: constant value distribution emits 0");
    if (dist.kind == ValueDist::Kind::Uniform && dist.a == 0.0 && dist.b == 0.0)
        throw std::invalid_argument("make_sparse_signal: degenerate uniform range");

    Rng rng(derive_seed(seed, 0x5157));
    SparseVector x;
    x.length = n;

    std::vector<std::size_t> support;
    support.reserve(k);
    if (k == n) {
        for (std::size_t j = 0; j < n; ++j) support.push_back(j);
    } else if (2 * k > n) {
        // Dense regime: partial Fisher-Yates over all n indices.
        std::vector<std::size_t> idx(n);
        for (std::size_t j = 0; j < n; ++j) idx[j] = j;
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t pick = t + rng.next_index(n - t);
            std::swap(idx[t], idx[pick]);
            support.push_back(idx[t]);
        }
        std::sort(support.begin(), support.end());
    } else {
        std::unordered_set<std::size_t> seen;
        while (support.size() < k) {
            const std::size_t j = rng.next_index(n);
            if (seen.insert(j).second) support.push_back(j);
        }
        std::sort(support.begin(), support.end());
    }

    x.entries.reserve(k);
    for (const std::size_t j : support) x.entries.emplace_back(j, draw_value(dist, rng));
    return x;
}

std::vector<double> add_tail(const SparseVector& x, const NoiseSpec& spec, std::uint64_t seed) {
    std::vector<double> out = x.dense();
    if (spec.sigma_z == 0.0) return out;
    Rng rng(derive_seed(seed, 0x7a11));
    std::size_t e = 0;
    for (std::size_t j = 0; j < x.length; ++j) {
        if (e < x.entries.size() && x.entries[e].first == j) {
            ++e;  // support stays exact
            continue;
        }
        out[j] = spec.sigma_z * rng.next_normal();
    }
    return out;
}

double relative_l1_error(const std::vector<double>& x, const std::vector<double>& xhat) {
    if (x.size() != xhat.size())
        throw std::invalid_argument("relative_l1_error: length mismatch");
    double diff = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        diff += std::abs(x[j] - xhat[j]);
        norm += std::abs(x[j]);
    }
    if (norm == 0.0) {
        if (diff == 0.0) return 0.0;
        throw std::domain_error("relative_l1_error: x is zero but xhat is not");
    }
    return diff / norm;
}

double relative_l1_error(const SparseVector& x, const SparseVector& xhat) {
    return relative_l1_error(x.dense(), xhat.dense());
}

double relative_l1_error(const std::vector<double>& x, const SparseVector& xhat) {
    return relative_l1_error(x, xhat.dense());
}

}  // namespace shofa
