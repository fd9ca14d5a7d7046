// dense_reference.hpp — independent brute-force oracles for the test suites.
//
// Everything here works on explicit dense matrices and naive loops, on
// purpose: these routines cross-check the analytic log-polar row machinery
// and the rationalized period detection without sharing any code with them.
#pragma once

#include "sampleobs/sysmodel.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>

namespace sampleobs::testing {

// Dense Jordan-form system matrix.
inline Eigen::MatrixXcd dense_jordan_matrix(const SystemSpec& system) {
    const int n = dimension(system);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    int start = 0;
    for (const JordanBlock& block : system.blocks) {
        const std::complex<double> lambda = block.eigenvalue.value();
        for (int i = start; i < start + block.size; ++i) {
            a(i, i) = lambda;
            if (i + 1 < start + block.size) a(i, i + 1) = 1.0;
        }
        start += block.size;
    }
    return a;
}

// C * A^t by multiplying the dense matrix t times.
inline Eigen::RowVectorXcd dense_row(const SystemSpec& system, std::int64_t t) {
    const int n = dimension(system);
    const Eigen::MatrixXcd a = dense_jordan_matrix(system);
    Eigen::RowVectorXcd row(n);
    for (int i = 0; i < n; ++i) row(i) = system.C[static_cast<std::size_t>(i)];
    for (std::int64_t k = 0; k < t; ++k) row = row * a;
    return row;
}

// First h <= bound with a^h == b^h in plain complex arithmetic.
inline std::optional<std::int64_t> brute_minimal_period(const Eigenvalue& a, const Eigenvalue& b,
                                                        std::int64_t bound,
                                                        double tol = 1e-9) {
    const std::complex<double> za = a.value();
    const std::complex<double> zb = b.value();
    std::complex<double> pa = 1.0, pb = 1.0;
    for (std::int64_t h = 1; h <= bound; ++h) {
        pa *= za;
        pb *= zb;
        if (std::abs(pa - pb) <= tol * std::max(std::abs(pa), std::abs(pb))) return h;
    }
    return std::nullopt;
}

}  // namespace sampleobs::testing
