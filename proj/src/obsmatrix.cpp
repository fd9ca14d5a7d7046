#include "sampleobs/obsmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sampleobs {

namespace {

struct PolarTerm {
    double log_mag;
    double phase;
};

}  // namespace

double log_binomial(std::int64_t t, int k) {
    if (k < 0 || k > t) throw std::invalid_argument("log_binomial: k out of range");
    double s = 0.0;
    for (int j = 1; j <= k; ++j) {
        s += std::log(static_cast<double>(t - k + j)) - std::log(static_cast<double>(j));
    }
    return s;
}

double SampledRow::scale() const { return std::exp(log_scale); }

SampledRow row_at(const SystemSpec& system, std::int64_t t) {
    if (t < 0) throw std::invalid_argument("row_at: negative sample instant");
    const int n = dimension(system);

    // Entry b of C*A^t inside a block starting at column s with eigenvalue
    // lambda: sum over a = s..b of C[a] * binom(t, b-a) * lambda^(t-(b-a)).
    std::vector<std::vector<PolarTerm>> terms(static_cast<std::size_t>(n));
    double max_log = -std::numeric_limits<double>::infinity();

    int start = 0;
    for (const JordanBlock& block : system.blocks) {
        const double log_m = std::log(block.eigenvalue.modulus);
        for (int b = start; b < start + block.size; ++b) {
            for (int a = start; a <= b; ++a) {
                const int k = b - a;
                if (k > t) continue;  // binom(t, k) = 0
                const double c = system.C[static_cast<std::size_t>(a)];
                if (c == 0.0) continue;
                PolarTerm term;
                term.log_mag = std::log(std::abs(c)) + log_binomial(t, k) +
                               static_cast<double>(t - k) * log_m;
                term.phase = block.eigenvalue.phase.times(t - k).value() +
                             (c < 0.0 ? std::numbers::pi : 0.0);
                terms[static_cast<std::size_t>(b)].push_back(term);
                max_log = std::max(max_log, term.log_mag);
            }
        }
        start += block.size;
    }

    SampledRow row;
    row.t = t;
    row.entries = Eigen::RowVectorXcd::Zero(n);
    for (int b = 0; b < n; ++b) {
        std::complex<double> acc = 0.0;
        for (const PolarTerm& term : terms[static_cast<std::size_t>(b)]) {
            acc += std::polar(std::exp(term.log_mag - max_log), term.phase);
        }
        row.entries(b) = acc;
    }

    const double max_abs = row.entries.cwiseAbs().maxCoeff();
    if (!(max_abs > 0.0)) {
        // Cannot happen for a validated system: the first column of each block
        // contributes the single term C[s] * lambda^t != 0.
        throw std::logic_error("row_at: zero row from a validated system");
    }
    row.entries /= max_abs;
    row.log_scale = max_log + std::log(max_abs);
    return row;
}

Eigen::RowVectorXcd raw_row_at(const SystemSpec& system, std::int64_t t) {
    const SampledRow row = row_at(system, t);
    return row.entries * std::exp(row.log_scale);
}

ObservabilityMatrix observability_matrix(const SystemSpec& system, const Schedule& schedule) {
    if (schedule.instants.empty()) {
        throw std::invalid_argument("observability_matrix: empty schedule");
    }
    const int n = dimension(system);
    const int l = static_cast<int>(schedule.instants.size());
    ObservabilityMatrix result;
    result.rows.resize(l, n);
    result.log_scales.resize(static_cast<std::size_t>(l));
    result.instants = schedule.instants;

#pragma omp parallel for schedule(static) if (l >= 64)
    for (int i = 0; i < l; ++i) {
        const SampledRow row = row_at(system, schedule.instants[static_cast<std::size_t>(i)]);
        result.rows.row(i) = row.entries;
        result.log_scales[static_cast<std::size_t>(i)] = row.log_scale;
    }
    return result;
}

RankResult numeric_rank(const Eigen::MatrixXcd& matrix, double tol_rel) {
    RankResult result;
    result.tol_rel = tol_rel > 0.0
                         ? tol_rel
                         : 1e-9 * static_cast<double>(std::max(matrix.rows(), matrix.cols()));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix, Eigen::ComputeFullV);
    result.singular_values = svd.singularValues();
    result.right_vectors = svd.matrixV();
    const double sigma1 = result.singular_values.size() > 0 ? result.singular_values(0) : 0.0;
    if (sigma1 > 0.0) {
        const double threshold = result.tol_rel * sigma1;
        for (Eigen::Index i = 0; i < result.singular_values.size(); ++i) {
            if (result.singular_values(i) > threshold) ++result.rank;
        }
    }
    return result;
}

ObservabilityReport rank_verdict(const SystemSpec& system, const Schedule& schedule,
                                 double tol_rel) {
    const ObservabilityMatrix m = observability_matrix(system, schedule);
    const RankResult r = numeric_rank(m.rows, tol_rel);
    ObservabilityReport report;
    report.n = dimension(system);
    report.rank = r.rank;
    report.observable = report.rank == report.n;
    report.tolerance = r.tol_rel;
    const double sigma1 = r.singular_values.size() > 0 ? r.singular_values(0) : 0.0;
    report.scaled_singular_values.reserve(static_cast<std::size_t>(r.singular_values.size()));
    for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) {
        report.scaled_singular_values.push_back(sigma1 > 0.0 ? r.singular_values(i) / sigma1
                                                             : 0.0);
    }
    if (!report.observable && r.right_vectors.cols() == report.n) {
        report.witness = r.right_vectors.col(report.n - 1);
    }
    return report;
}

double conjugation_sensitivity(const SystemSpec& system, const Schedule& schedule,
                               double tol_rel) {
    const ObservabilityReport a = rank_verdict(system, schedule, tol_rel);
    const ObservabilityReport b = rank_verdict(conjugate(system), schedule, tol_rel);
    double worst = 0.0;
    const std::size_t k = std::min(a.scaled_singular_values.size(), b.scaled_singular_values.size());
    for (std::size_t i = 0; i < k; ++i) {
        worst = std::max(worst,
                         std::abs(a.scaled_singular_values[i] - b.scaled_singular_values[i]));
    }
    return worst;
}

}  // namespace sampleobs
