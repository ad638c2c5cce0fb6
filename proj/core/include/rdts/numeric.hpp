#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace rdts {

// Neumaier-compensated accumulator. Probability sums over a few hundred
// terms stay accurate to a couple of ulps regardless of term ordering.
class CompensatedSum {
  public:
    CompensatedSum & operator+=(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc += x;
    return acc.value();
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc.value();
}

inline double norm(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) noexcept {
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return std::sqrt(acc.value());
}

/// x ln x with the 0 ln 0 = 0 convention.
inline double xlogx(double x) noexcept { return x > 0.0 ? x * std::log(x) : 0.0; }

using Rng = std::mt19937_64;

// Splittable streams: every (root seed, key...) tuple maps to an independent
// generator, so work can be partitioned across threads without changing the
// numbers any single unit of work sees.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <typename... Keys>
Rng make_stream(std::uint64_t root, Keys... keys) {
    std::uint64_t state = splitmix64(root);
    ((state = splitmix64(state ^ splitmix64(static_cast<std::uint64_t>(keys) + 0x632be59bd9b4e019ULL))), ...);
    std::seed_seq seq{static_cast<std::uint32_t>(state), static_cast<std::uint32_t>(state >> 32),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state) >> 32)};
    return Rng(seq);
}

}  // namespace rdts
