// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 mentionet contributors

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mentionet {

/// Deterministic 64-bit generator (SplitMix64). All randomness in the
/// library flows through this type so that seeded runs produce identical
/// output on every platform; the standard distributions are
/// implementation-defined and would break that contract.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Unbiased integer in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t threshold = -bound % bound;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Knuth's product method; fine for the small rates used here.
    std::uint64_t poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform01();
        } while (p > limit);
        return k - 1;
    }

    /// Fisher-Yates, driven by below() so results are platform-stable.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Derive an independent child stream, e.g. one per pipeline stage.
    Rng fork(std::uint64_t salt) {
        Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
        child.next();
        return child;
    }

private:
    std::uint64_t state_;
};

/// Zipf(s) sampler over ranks 0..n-1 (rank 0 most probable),
/// inverse-CDF with binary search over precomputed cumulative mass.
class ZipfSampler {
public:
    ZipfSampler(std::size_t n, double s) : cum_(n) {
        if (n == 0) throw std::invalid_argument("ZipfSampler: n must be positive");
        if (s <= 0.0) throw std::invalid_argument("ZipfSampler: exponent must be positive");
        double total = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            total += std::pow(static_cast<double>(r + 1), -s);
            cum_[r] = total;
        }
        for (auto& c : cum_) c /= total;
        cum_.back() = 1.0;
    }

    std::size_t draw(Rng& rng) const {
        const double z = rng.uniform01();
        std::size_t lo = 0, hi = cum_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cum_[mid] < z)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    /// P(rank == r), for goodness-of-fit checks.
    double pmf(std::size_t r) const {
        if (r >= cum_.size()) return 0.0;
        return cum_[r] - (r == 0 ? 0.0 : cum_[r - 1]);
    }

    std::size_t size() const { return cum_.size(); }

private:
    std::vector<double> cum_;
};

} // namespace mentionet
