// obsmatrix.hpp — analytic rows C*A^t from the Jordan structure and the
// numeric rank verdict on the sampled observability matrix.
//
// Rows are assembled in log-magnitude/phase form so that |lambda|^t neither
// overflows nor underflows for large t, then infinity-norm normalized; row
// scaling never changes the row space, so the rank verdict is unaffected.
#pragma once

#include "sampleobs/sysmodel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sampleobs {

struct SampledRow {
    std::int64_t t = 0;
    Eigen::RowVectorXcd entries;  // infinity-norm 1 after normalization
    double log_scale = 0.0;       // raw row = entries * exp(log_scale)

    double scale() const;
};

SampledRow row_at(const SystemSpec& system, std::int64_t t);

// Raw (unnormalized) row C*A^t as plain complex numbers; only safe for
// moderate t where exp(log_scale) is representable.
Eigen::RowVectorXcd raw_row_at(const SystemSpec& system, std::int64_t t);

struct ObservabilityMatrix {
    Eigen::MatrixXcd rows;               // l x n, normalized rows
    std::vector<double> log_scales;      // per row
    std::vector<std::int64_t> instants;  // schedule order
};

ObservabilityMatrix observability_matrix(const SystemSpec& system, const Schedule& schedule);

// Rank of an already-normalized row matrix: the count of singular values
// above tol_rel * sigma_1. tol_rel <= 0 selects 1e-9 * max(l, n). This is the
// single rank engine shared by every verdict in the library.
struct RankResult {
    int rank = 0;
    Eigen::VectorXd singular_values;
    Eigen::MatrixXcd right_vectors;  // full V
    double tol_rel = 0.0;
};

RankResult numeric_rank(const Eigen::MatrixXcd& matrix, double tol_rel = 0.0);

ObservabilityReport rank_verdict(const SystemSpec& system, const Schedule& schedule,
                                 double tol_rel = 0.0);

// Largest relative change of any singular value when all phases are
// conjugated; near zero for systems whose spectrum is closed under
// conjugation with matching C.
double conjugation_sensitivity(const SystemSpec& system, const Schedule& schedule,
                               double tol_rel = 0.0);

// log(binomial(t, k)) for 0 <= k <= t, exact 0 at k = 0 and k = t.
double log_binomial(std::int64_t t, int k);

}  // namespace sampleobs
