#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace seqmbqc {

// All sampling maps raw mt19937_64 output through the helpers below instead
// of the standard distributions, whose exact sequences are
// implementation-defined. This keeps fixed-seed runs byte-identical.

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller.
inline double normal01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 0.0)
        u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Haar-ish random unit vector (normalized complex Gaussian entries).
inline Eigen::VectorXcd random_unit_vector(std::mt19937_64& rng, long long dim) {
    Eigen::VectorXcd v(dim);
    for (long long i = 0; i < dim; ++i)
        v[i] = std::complex<double>(normal01(rng), normal01(rng));
    double norm = v.norm();
    if (norm == 0.0)
        v[0] = 1.0, norm = 1.0;
    return v / norm;
}

}  // namespace seqmbqc
