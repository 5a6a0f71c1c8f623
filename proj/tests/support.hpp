// support.hpp: helpers shared by the unit and acceptance tests

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace sps::test {

// Fixed seed: failures must be reproducible.
inline std::mt19937_64 make_rng(std::uint64_t salt = 0) {
    return std::mt19937_64(0x5eed5eedULL ^ salt);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// One draw per range, in order; argument lists leave the order unspecified.
inline std::vector<double> uniforms(std::mt19937_64& rng, std::initializer_list<std::pair<double, double>> ranges) {
    std::vector<double> out;
    for (const auto& [lo, hi] : ranges) {
        out.push_back(uniform(rng, lo, hi));
    }
    return out;
}

// |a - b| <= tol * max(1e-300, |b|)
inline bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(1e-300, std::abs(b));
}

// Residual of an identity sum = 0 relative to the largest term in it.
inline double identity_residual(double residual, std::initializer_list<double> terms) {
    double scale = 0.0;
    for (double t : terms) {
        scale = std::max(scale, std::abs(t));
    }
    return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual);
}

} // namespace sps::test
