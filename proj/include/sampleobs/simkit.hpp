// simkit.hpp — trajectory simulation and least-squares initial-state
// reconstruction from sampled outputs.
#pragma once

#include "sampleobs/obsmatrix.hpp"
#include "sampleobs/sysmodel.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace sampleobs {

struct Trajectory {
    Eigen::VectorXcd x0;
    std::vector<Eigen::VectorXd> inputs;        // u(0..t_max), empty when autonomous
    std::vector<std::complex<double>> outputs;  // y(0..t_max)
};

// Iterates x(t+1) = A x(t) + B u(t), y(t) = C x(t) + D u(t) in double
// precision. inputs must cover 0..t_max or be empty (autonomous run).
Trajectory simulate(const SystemSpec& system, const Eigen::VectorXcd& x0,
                    const std::vector<Eigen::VectorXd>& inputs, std::int64_t t_max);

struct ReconstructionResult {
    Eigen::VectorXcd x0_estimate;
    double residual = 0.0;   // least-squares residual in the normalized system
    double imag_norm = 0.0;  // infinity norm of the estimate's imaginary part
    bool unique = false;     // rank == n
    ObservabilityReport rank_report;
};

// Subtracts the forced response, then solves the normalized least-squares
// system row_at(t_i) * x0 = y_free(t_i). Throws InconsistentSamples when the
// residual is large despite full rank.
ReconstructionResult reconstruct_initial_state(const SystemSpec& system, const Schedule& schedule,
                                               const std::vector<std::complex<double>>& samples,
                                               const std::vector<Eigen::VectorXd>& inputs = {},
                                               double tol_rel = 0.0,
                                               double residual_tol = 1e-6);

// Forced part of the output at time t: sum_k C A^(t-1-k) B u(k) + D u(t),
// assembled from raw analytic rows.
std::complex<double> forced_response(const SystemSpec& system, std::int64_t t,
                                     const std::vector<Eigen::VectorXd>& inputs);

}  // namespace sampleobs
