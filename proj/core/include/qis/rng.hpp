// Copyright 2026 The QIS Solver Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>

namespace qis {

/// Portable pseudo-random source used by every generator and solver.
///
/// Stream definition (version 1, frozen): the 64-bit seed is expanded into
/// the 256-bit state with SplitMix64, then numbers are drawn with
/// xoshiro256**. All derived variates below are defined in terms of
/// `next()` only, so a (seed, call sequence) pair reproduces bit-for-bit on
/// any conforming platform. Do not change these definitions without bumping
/// `kStreamVersion`: instance files and benchmark seeds depend on them.
class Rng {
 public:
    using result_type = std::uint64_t;

    static constexpr int kStreamVersion = 1;
    static constexpr const char* kStreamName = "xoshiro256**/splitmix64";

    explicit Rng(std::uint64_t seed = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return next(); }
    result_type next() noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Uniform in the open interval (0, 1).
    double uniform_open() noexcept;

    /// Uniform integer in [0, bound), unbiased (bitmask rejection). `bound` > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

    bool coin() noexcept { return (next() >> 63) != 0; }

    /// Standard normal via the inverse CDF of `uniform_open()`.
    double normal() noexcept;

    /// Fisher-Yates shuffle driven by `below()`.
    template <class T>
    void shuffle(std::span<T> values) noexcept {
        for (std::size_t i = values.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    /// Derive an independent child stream (used for batch replicas and workers).
    Rng split() noexcept { return Rng(next()); }

 private:
    std::uint64_t state_[4];
};

/// Inverse of the standard normal CDF, p in (0, 1).
///
/// Acklam's rational approximation followed by one Halley step against
/// std::erfc; absolute error below 1e-14 over (1e-300, 1 - 1e-16).
double inverse_normal_cdf(double p) noexcept;

/// SplitMix64 finalizer, exposed for deterministic seed derivation.
std::uint64_t mix_seed(std::uint64_t value) noexcept;

}  // namespace qis
