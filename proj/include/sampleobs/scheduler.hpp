// scheduler.hpp — measurement-schedule synthesis with per-scheme guarantees.
//
// Each scheme checks its own applicability conditions, records them in the
// result, and produces a schedule that is guaranteed observable whenever the
// conditions hold.
#pragma once

#include "sampleobs/spectral.hpp"
#include "sampleobs/sysmodel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sampleobs {

struct ConditionCheck {
    std::string name;
    bool ok = false;
};

struct SchemeResult {
    Schedule schedule;
    std::string scheme;
    std::string guarantee;  // which guarantee backs the schedule
    std::int64_t sample_count_bound = 0;
    std::vector<ConditionCheck> conditions_checked;
};

// n = 2: two arbitrary instants suffice unless the pair is pathological, in
// which case ceil(1 + T/h_bar) samples inside the window [t, t+T-1] do.
SchemeResult scheme_second_order(const SystemSpec& system, std::int64_t t, std::int64_t T,
                                 std::int64_t h_max = kDefaultHMax, double tol = kDefaultTol);

// Real spectrum. Three regimes: all eigenvalues positive (n samples), no
// opposite-sign pair (2n-1 samples), otherwise an interval bound
// ceil((N_p + T)/2) on a window of length T >= 2n.
SchemeResult scheme_real_eigs(const SystemSpec& system,
                              const std::vector<std::int64_t>& candidate_instants,
                              double tol = kDefaultTol);

// n equidistant instants t1 + i*t_bar; valid for every non-pathological
// spacing t_bar.
SchemeResult scheme_regular(const SystemSpec& system, std::int64_t t1, std::int64_t t_bar,
                            const PathologyReport& report);

// Structural test for "C is never proportional to C*A^t": fails exactly when
// the system is diagonalizable, every eigenvalue pair is pathological, and the
// pairwise minimal periods have a common multiple within h_max.
bool check_condition_CCA(const SystemSpec& system, const PathologyReport& report);

// n = 3: {t1, t2, t1+delta, t2+delta} with a non-pathological shift delta.
SchemeResult scheme_third_order_irregular(const SystemSpec& system, std::int64_t t1,
                                          std::int64_t t2, std::int64_t delta,
                                          const PathologyReport& report);

// n >= 3: iterated shift-doubling K_i = K_{i-1} union (K_{i-1} + delta_{i-1})
// from the base pair; 2^(n-1) samples, each shift raising the rank.
SchemeResult scheme_doubling(const SystemSpec& system, std::pair<std::int64_t, std::int64_t> base,
                             const std::vector<std::int64_t>& deltas,
                             const PathologyReport& report);

// For systems whose n eigenvalues are distinct n-th roots of a common value:
// membership test for the residue-complete sample families that are necessary
// and sufficient for observability, plus the interval bound that makes
// arbitrary sampling meaningless for such systems.
class WorstCasePredicate {
  public:
    WorstCasePredicate(int n, std::int64_t horizon) : n_(n), horizon_(horizon) {}

    int order() const { return n_; }
    std::int64_t horizon() const { return horizon_; }

    // True iff the schedule contains an anchor t and, for each i = 1..n-1, an
    // instant >= t+i congruent to t+i mod n.
    bool contains_required_set(const Schedule& schedule) const;

    // Samples needed per window of length T when sampling arbitrarily:
    // 1 + ceil((n-1)*T/n).
    std::int64_t arbitrary_sample_bound(std::int64_t T) const;

    std::string bound_note() const;

  private:
    int n_;
    std::int64_t horizon_;
};

WorstCasePredicate worst_case_required_sets(const SystemSpec& system, std::int64_t horizon,
                                            double tol = kDefaultTol);

// True when every phase is 0 or pi within tol.
bool has_real_spectrum(const SystemSpec& system, double tol = kDefaultTol);

// Count of eigenvalues that belong to an opposite-sign pair (lambda, -lambda).
int opposite_pair_eigenvalue_count(const SystemSpec& system, double tol = kDefaultTol);

enum class Scheme { second_order, real_eigs, regular, third_order, doubling };

std::string to_string(Scheme s);
std::optional<Scheme> scheme_from_string(const std::string& s);

// Parsed synthesis request; only the fields the chosen scheme needs are read.
struct SchemeRequest {
    Scheme scheme = Scheme::regular;
    std::int64_t t = 0;       // window start (second_order)
    std::int64_t T = 0;       // window length (second_order)
    std::int64_t t1 = 0;      // regular / third_order / doubling
    std::int64_t t2 = 0;      // third_order / doubling
    std::int64_t t_bar = 0;   // regular
    std::int64_t delta = 0;   // third_order
    std::vector<std::int64_t> deltas;      // doubling
    std::vector<std::int64_t> candidates;  // real_eigs
};

SchemeResult run_scheme(const SystemSpec& system, const SchemeRequest& request,
                        const PathologyReport& report);

}  // namespace sampleobs
