#include "sampleobs/simkit.hpp"

#include "sampleobs/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sampleobs {

namespace {

void check_inputs(const SystemSpec& system, const std::vector<Eigen::VectorXd>& inputs,
                  std::int64_t t_max) {
    if (inputs.empty()) return;
    const int m = system.input_count();
    if (m == 0) {
        throw DimensionMismatch("inputs supplied but the system has no B or D");
    }
    if (static_cast<std::int64_t>(inputs.size()) < t_max + 1) {
        std::ostringstream os;
        os << "need inputs u(0.." << t_max << "), got " << inputs.size() << " vectors";
        throw DimensionMismatch(os.str());
    }
    for (const auto& u : inputs) {
        if (u.size() != m) {
            throw DimensionMismatch("input vector length does not match the system input count");
        }
    }
}

// x <- A x + B u for the Jordan-form A, in place.
void advance_state(const SystemSpec& system, Eigen::VectorXcd& x, const Eigen::VectorXd* u) {
    Eigen::VectorXcd next(x.size());
    int start = 0;
    for (const JordanBlock& block : system.blocks) {
        const std::complex<double> lambda = block.eigenvalue.value();
        for (int i = start; i < start + block.size; ++i) {
            next(i) = lambda * x(i);
            if (i + 1 < start + block.size) next(i) += x(i + 1);
        }
        start += block.size;
    }
    if (u && system.B) next += system.B->cast<std::complex<double>>() * (*u);
    x = std::move(next);
}

std::complex<double> output_at(const SystemSpec& system, const Eigen::VectorXcd& x,
                               const Eigen::VectorXd* u) {
    std::complex<double> y = 0.0;
    for (int i = 0; i < x.size(); ++i) y += system.C[static_cast<std::size_t>(i)] * x(i);
    if (u && system.D) y += (*system.D * *u)(0);
    return y;
}

}  // namespace

Trajectory simulate(const SystemSpec& system, const Eigen::VectorXcd& x0,
                    const std::vector<Eigen::VectorXd>& inputs, std::int64_t t_max) {
    require_valid(system);
    const int n = dimension(system);
    if (x0.size() != n) throw DimensionMismatch("simulate: x0 length does not match n");
    if (t_max < 0) throw std::invalid_argument("simulate: t_max must be >= 0");
    check_inputs(system, inputs, t_max);

    Trajectory traj;
    traj.x0 = x0;
    traj.inputs = inputs;
    traj.outputs.reserve(static_cast<std::size_t>(t_max) + 1);

    Eigen::VectorXcd x = x0;
    for (std::int64_t t = 0; t <= t_max; ++t) {
        const Eigen::VectorXd* u =
            inputs.empty() ? nullptr : &inputs[static_cast<std::size_t>(t)];
        traj.outputs.push_back(output_at(system, x, u));
        if (t < t_max) advance_state(system, x, u);
    }
    return traj;
}

std::complex<double> forced_response(const SystemSpec& system, std::int64_t t,
                                     const std::vector<Eigen::VectorXd>& inputs) {
    if (inputs.empty()) return 0.0;
    std::complex<double> y = 0.0;
    if (system.B) {
        const Eigen::MatrixXcd b = system.B->cast<std::complex<double>>();
        for (std::int64_t k = 0; k < t; ++k) {
            // C A^(t-1-k) B u(k), reusing the analytic row machinery.
            const Eigen::RowVectorXcd row = raw_row_at(system, t - 1 - k);
            y += (row * (b * inputs[static_cast<std::size_t>(k)]))(0);
        }
    }
    if (system.D) y += (*system.D * inputs[static_cast<std::size_t>(t)])(0);
    return y;
}

ReconstructionResult reconstruct_initial_state(const SystemSpec& system, const Schedule& schedule,
                                               const std::vector<std::complex<double>>& samples,
                                               const std::vector<Eigen::VectorXd>& inputs,
                                               double tol_rel, double residual_tol) {
    require_valid(system);
    if (samples.size() != schedule.instants.size()) {
        throw DimensionMismatch("reconstruct_initial_state: |samples| != |schedule|");
    }
    if (schedule.instants.empty()) {
        throw std::invalid_argument("reconstruct_initial_state: empty schedule");
    }
    if (!inputs.empty()) check_inputs(system, inputs, schedule.instants.back());

    const int n = dimension(system);
    const int l = static_cast<int>(schedule.instants.size());
    const ObservabilityMatrix obs = observability_matrix(system, schedule);

    // Free response in the same normalization as the rows: both sides of
    // row_at(t_i) * x0 = y_free(t_i) are divided by the row scale.
    Eigen::VectorXcd rhs(l);
    for (int i = 0; i < l; ++i) {
        const std::int64_t t = schedule.instants[static_cast<std::size_t>(i)];
        const std::complex<double> y_free =
            samples[static_cast<std::size_t>(i)] - forced_response(system, t, inputs);
        rhs(i) = y_free * std::exp(-obs.log_scales[static_cast<std::size_t>(i)]);
    }

    const RankResult rank = numeric_rank(obs.rows, tol_rel);

    ReconstructionResult result;
    result.rank_report.n = n;
    result.rank_report.rank = rank.rank;
    result.rank_report.observable = rank.rank == n;
    result.rank_report.tolerance = rank.tol_rel;
    const double sigma1 = rank.singular_values.size() > 0 ? rank.singular_values(0) : 0.0;
    for (Eigen::Index i = 0; i < rank.singular_values.size(); ++i) {
        result.rank_report.scaled_singular_values.push_back(
            sigma1 > 0.0 ? rank.singular_values(i) / sigma1 : 0.0);
    }
    if (rank.rank < n) result.rank_report.witness = rank.right_vectors.col(n - 1);
    result.unique = rank.rank == n;

    // Minimum-norm least squares through the same SVD tolerance as the rank
    // verdict, so "observable" and "uniquely reconstructible" cannot disagree.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(obs.rows,
                                           Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double threshold = rank.tol_rel * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXcd coeffs = svd.matrixU().adjoint() * rhs;
    Eigen::VectorXcd solution = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) {
            solution += svd.matrixV().col(i) * (coeffs(i) / sv(i));
        }
    }
    result.x0_estimate = solution;
    result.residual = (obs.rows * solution - rhs).norm();
    result.imag_norm = solution.imag().cwiseAbs().maxCoeff();

    if (result.unique && result.residual > residual_tol * std::max(1.0, rhs.norm())) {
        std::ostringstream os;
        os << "reconstruct_initial_state: residual " << result.residual
           << " with full rank; samples are inconsistent with the system";
        throw InconsistentSamples(os.str(), result.residual);
    }
    return result;
}

}  // namespace sampleobs
