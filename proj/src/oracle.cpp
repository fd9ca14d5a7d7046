#include "sampleobs/oracle.hpp"

#include "sampleobs/errors.hpp"
#include "sampleobs/scheduler.hpp"
#include "sampleobs/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sampleobs {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Next bitmask with the same popcount (Gosper). mask must be nonzero.
std::uint64_t next_same_popcount(std::uint64_t mask) {
    const std::uint64_t u = mask & (~mask + 1);
    const std::uint64_t v = mask + u;
    return v | (((v ^ mask) / u) >> 2);
}

std::vector<std::uint64_t> level_masks(int T, int k) {
    std::vector<std::uint64_t> masks;
    if (k > T || k <= 0) return masks;
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = T < 64 ? (std::uint64_t{1} << T) : ~std::uint64_t{0};
    while (mask < limit) {
        masks.push_back(mask);
        if (mask == 0) break;
        mask = next_same_popcount(mask);
    }
    return masks;
}

bool mask_observable(const Eigen::MatrixXcd& window_rows, std::uint64_t mask, int n,
                     double tol_rel) {
    const int k = std::popcount(mask);
    if (k < n) return false;  // rank <= row count
    Eigen::MatrixXcd sub(k, window_rows.cols());
    int r = 0;
    for (int i = 0; i < window_rows.rows(); ++i) {
        if (mask & (std::uint64_t{1} << i)) sub.row(r++) = window_rows.row(i);
    }
    return numeric_rank(sub, tol_rel).rank == n;
}

std::vector<std::int64_t> mask_to_instants(std::uint64_t mask, std::int64_t t0) {
    std::vector<std::int64_t> out;
    for (int i = 0; i < 64; ++i) {
        if (mask & (std::uint64_t{1} << i)) out.push_back(t0 + i);
    }
    return out;
}

struct FailingBest {
    bool found = false;
    std::uint64_t mask = 0;

    void offer(std::uint64_t candidate) {
        if (!found || candidate < mask) {
            found = true;
            mask = candidate;
        }
    }
    void merge(const FailingBest& other) {
        if (other.found) offer(other.mask);
    }
};

// Scans one subset size; returns the smallest failing mask if any. The whole
// level is always evaluated so the serial and parallel paths report identical
// studies.
FailingBest scan_level(const Eigen::MatrixXcd& window_rows, int T, int k, int n, double tol_rel,
                       Execution exec, std::int64_t& evaluated) {
    const std::vector<std::uint64_t> masks = level_masks(T, k);
    evaluated += static_cast<std::int64_t>(masks.size());
    FailingBest best;
    if (exec == Execution::serial) {
        for (std::uint64_t mask : masks) {
            if (!mask_observable(window_rows, mask, n, tol_rel)) best.offer(mask);
        }
        return best;
    }
#pragma omp parallel
    {
        FailingBest local;
#pragma omp for schedule(dynamic, 64) nowait
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(masks.size()); ++i) {
            const std::uint64_t mask = masks[static_cast<std::size_t>(i)];
            if (!mask_observable(window_rows, mask, n, tol_rel)) local.offer(mask);
        }
#pragma omp critical
        best.merge(local);
    }
    return best;
}

Eigen::MatrixXcd window_row_matrix(const SystemSpec& system, std::int64_t t0, std::int64_t T) {
    std::vector<std::int64_t> instants(static_cast<std::size_t>(T));
    std::iota(instants.begin(), instants.end(), t0);
    return observability_matrix(system, Schedule::from_instants(std::move(instants))).rows;
}

}  // namespace

WindowStudy min_samples_in_window(const SystemSpec& system, std::int64_t t0, std::int64_t T,
                                  std::int64_t cap, std::uint64_t seed, Execution exec,
                                  double tol_rel) {
    require_valid(system);
    if (t0 < 0 || T < 1) throw std::invalid_argument("min_samples_in_window: bad window");
    if (T > 63) throw std::invalid_argument("min_samples_in_window: window longer than 63");
    const int n = dimension(system);
    const Eigen::MatrixXcd rows = window_row_matrix(system, t0, T);

    WindowStudy study;
    study.t0 = t0;
    study.T = T;

    if (T <= kExhaustiveWindowCap) {
        study.exhaustive = true;
        // Largest sizes first; the first size with a failure is the maximal
        // failing size, and everything above it has been certified observable.
        for (int k = static_cast<int>(T); k >= std::max(1, n); --k) {
            const FailingBest best =
                scan_level(rows, static_cast<int>(T), k, n, tol_rel, exec, study.subsets_evaluated);
            if (best.found) {
                study.max_failing_subset_size = k;
                study.failing_witness = mask_to_instants(best.mask, t0);
                study.min_observable_size = static_cast<std::int64_t>(k) + 1;
                return study;
            }
        }
        // No failing subset of size >= n: subsets below n fail trivially.
        study.max_failing_subset_size = std::min<std::int64_t>(n - 1, T);
        study.min_observable_size = study.max_failing_subset_size + 1;
        if (study.max_failing_subset_size > 0) {
            const std::uint64_t mask =
                (std::uint64_t{1} << study.max_failing_subset_size) - 1;
            study.failing_witness = mask_to_instants(mask, t0);
        }
        return study;
    }

    // Sampled mode: seeded uniform subset draws, no certification.
    study.exhaustive = false;
    if (cap < 1) throw std::invalid_argument("min_samples_in_window: sampled mode needs cap >= 1");
    std::mt19937_64 rng(seed);
    const std::uint64_t limit = (std::uint64_t{1} << T) - 1;
    std::uniform_int_distribution<std::uint64_t> dist(1, limit);
    std::vector<std::uint64_t> draws(static_cast<std::size_t>(cap));
    for (auto& d : draws) d = dist(rng);

    struct SampledBest {
        int size = 0;
        bool found = false;
        std::uint64_t mask = 0;
        void offer(std::uint64_t candidate) {
            const int k = std::popcount(candidate);
            if (!found || k > size || (k == size && candidate < mask)) {
                found = true;
                size = k;
                mask = candidate;
            }
        }
        void merge(const SampledBest& other) {
            if (other.found) offer(other.mask);
        }
    };
    SampledBest best;
    study.subsets_evaluated = cap;
#pragma omp parallel if (exec == Execution::parallel)
    {
        SampledBest local;
#pragma omp for schedule(dynamic, 64) nowait
        for (std::int64_t i = 0; i < cap; ++i) {
            const std::uint64_t mask = draws[static_cast<std::size_t>(i)];
            if (!mask_observable(rows, mask, n, tol_rel)) local.offer(mask);
        }
#pragma omp critical
        best.merge(local);
    }
    if (best.found) {
        study.max_failing_subset_size = best.size;
        study.failing_witness = mask_to_instants(best.mask, t0);
    } else {
        study.max_failing_subset_size = std::min<std::int64_t>(n - 1, T);
    }
    study.min_observable_size = study.max_failing_subset_size + 1;
    return study;
}

BoundCheck check_bound_second_order(const SystemSpec& system, std::int64_t t0, std::int64_t T,
                                    Execution exec, double tol_rel) {
    require_valid(system);
    if (dimension(system) != 2) {
        throw WrongDimension("check_bound_second_order: system dimension must be 2");
    }
    if (T > kExhaustiveWindowCap) {
        throw NotApplicable("check_bound_second_order: window too long for certification");
    }
    std::optional<std::int64_t> h_bar;
    if (system.blocks.size() == 2) {
        h_bar = minimal_pathological_period(system.blocks[0].eigenvalue,
                                            system.blocks[1].eigenvalue);
    }
    BoundCheck check;
    check.threshold = h_bar ? 1 + ceil_div(T, *h_bar) : 2;

    const WindowStudy study = min_samples_in_window(system, t0, T, 0, 0, exec, tol_rel);
    check.pass = study.min_observable_size <= check.threshold;
    if (!check.pass) check.counterexample = study.failing_witness;
    check.failing_below_threshold = study.max_failing_subset_size >= check.threshold - 1;
    return check;
}

BoundCheck check_bound_remark3(const SystemSpec& system, std::int64_t t0, std::int64_t T,
                               Execution exec, double tol_rel) {
    require_valid(system);
    if (!has_real_spectrum(system)) {
        throw NotApplicable("check_bound_remark3: spectrum is not real");
    }
    const int n = dimension(system);
    if (T < 2 * n) throw NotApplicable("check_bound_remark3: window must have length >= 2n");
    if (T > kExhaustiveWindowCap) {
        throw NotApplicable("check_bound_remark3: window too long for certification");
    }
    const int n_p = opposite_pair_eigenvalue_count(system);

    BoundCheck check;
    check.threshold = ceil_div(static_cast<std::int64_t>(n_p) + T, 2);
    const WindowStudy study = min_samples_in_window(system, t0, T, 0, 0, exec, tol_rel);
    check.pass = study.min_observable_size <= check.threshold;
    if (!check.pass) check.counterexample = study.failing_witness;
    check.failing_below_threshold = study.max_failing_subset_size >= check.threshold - 1;
    return check;
}

TrialReport check_theorem1(int trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RealSystemOptions options;  // no opposite-sign pairs by default
    TrialReport report;
    report.trials = trials;
    for (int trial = 0; trial < trials; ++trial) {
        const SystemSpec system = random_real_system(rng, options);
        const int n = dimension(system);
        std::vector<std::int64_t> pool(51);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(static_cast<std::size_t>(2 * n - 1));
        const Schedule schedule = Schedule::from_instants(std::move(pool), Provenance::oracle);
        if (!rank_verdict(system, schedule).observable) ++report.failures;
    }
    return report;
}

bool check_lemma4_equivalence(const SystemSpec& system, std::int64_t T, double tol_rel) {
    require_valid(system);
    const int n = dimension(system);
    if (n > 4) throw NotWorstCaseSystem("check_lemma4_equivalence: n must be <= 4");
    if (T < 1 || T > 16) {
        throw std::invalid_argument("check_lemma4_equivalence: T must be in [1, 16]");
    }
    const WorstCasePredicate predicate = worst_case_required_sets(system, T - 1);
    const Eigen::MatrixXcd rows = window_row_matrix(system, 0, T);

    const std::uint64_t limit = std::uint64_t{1} << T;
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        const Schedule schedule = Schedule::from_instants(mask_to_instants(mask, 0));
        const bool accepted = mask != 0 && predicate.contains_required_set(schedule);
        const bool observable = mask != 0 && mask_observable(rows, mask, n, tol_rel);
        if (accepted != observable) return false;
    }
    return true;
}

SystemSpec make_worst_case_system(int n, double gamma) {
    if (n < 1) throw std::invalid_argument("make_worst_case_system: n must be >= 1");
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("make_worst_case_system: gamma must be in (0, 1)");
    }
    SystemSpec system;
    const double modulus = std::pow(gamma, 1.0 / static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        system.blocks.push_back({Eigenvalue{modulus, Phase::exact(k, n)}, 1});
    }
    system.C.assign(static_cast<std::size_t>(n), 1.0);
    return system;
}

std::vector<double> random_output_row(std::mt19937_64& rng, const std::vector<int>& block_sizes) {
    std::uniform_real_distribution<double> lead(0.5, 1.5);
    std::uniform_real_distribution<double> other(-1.0, 1.0);
    std::bernoulli_distribution flip(0.5);
    std::vector<double> c;
    for (int size : block_sizes) {
        c.push_back(flip(rng) ? lead(rng) : -lead(rng));
        for (int i = 1; i < size; ++i) c.push_back(other(rng));
    }
    return c;
}

SystemSpec random_real_system(std::mt19937_64& rng, const RealSystemOptions& options) {
    std::uniform_int_distribution<int> n_dist(options.n_min, options.n_max);
    const int n = n_dist(rng);

    // Block sizes summing to n.
    std::vector<int> sizes;
    {
        std::bernoulli_distribution big(options.allow_jordan_blocks ? 0.25 : 0.0);
        int left = n;
        while (left > 0) {
            const int s = (left >= 2 && big(rng)) ? 2 : 1;
            sizes.push_back(s);
            left -= s;
        }
    }

    // Distinct moduli with a guaranteed gap: one draw per bin of an even
    // partition of the band, with half a gap of margin at every bin edge.
    const std::size_t k = sizes.size();
    const double gap = options.min_relative_gap * options.modulus_hi;
    const double width = (options.modulus_hi - options.modulus_lo) / static_cast<double>(k);
    if (width <= gap) {
        throw std::invalid_argument("random_real_system: band too narrow for the gap");
    }
    std::vector<double> moduli;
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_real_distribution<double> bin(
            options.modulus_lo + static_cast<double>(i) * width + gap / 2,
            options.modulus_lo + static_cast<double>(i + 1) * width - gap / 2);
        moduli.push_back(bin(rng));
    }
    std::shuffle(moduli.begin(), moduli.end(), rng);

    std::bernoulli_distribution flip(0.5);
    SystemSpec system;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        const bool negative = !options.positive_only && flip(rng);
        system.blocks.push_back(
            {Eigenvalue::real(negative ? -moduli[i] : moduli[i]), sizes[i]});
    }

    // Optionally turn two blocks into an opposite-sign pair (a pathological
    // pair with period 2). Distinct moduli otherwise never produce one.
    if (options.allow_opposite_pairs && system.blocks.size() >= 2 && flip(rng)) {
        const double m = system.blocks[0].eigenvalue.modulus;
        system.blocks[0].eigenvalue = Eigenvalue::real(m);
        system.blocks[1].eigenvalue = Eigenvalue::real(-m);
    }

    system.C = random_output_row(rng, [&] {
        std::vector<int> all;
        for (const auto& b : system.blocks) all.push_back(b.size);
        return all;
    }());
    return system;
}

SystemSpec random_exact_mixed_system(std::mt19937_64& rng, int n, int max_phase_den) {
    if (n < 1) throw std::invalid_argument("random_exact_mixed_system: n must be >= 1");
    if (max_phase_den < std::max(n, 2)) {
        throw std::invalid_argument("random_exact_mixed_system: max_phase_den too small");
    }

    // Equal-modulus families carry the pathological structure; their members
    // are separated by exact phases (far apart on the circle), so only the
    // family moduli need a guaranteed gap. At most three families and one
    // size-2 Jordan block keep the rank verdict's tolerance regime safe.
    std::uniform_int_distribution<int> k_dist(1, std::min(3, n));
    const int k = k_dist(rng);
    std::vector<int> family_dims(static_cast<std::size_t>(k), 1);
    for (int extra = n - k; extra > 0; --extra) {
        std::uniform_int_distribution<int> pick(0, k - 1);
        ++family_dims[static_cast<std::size_t>(pick(rng))];
    }

    // Family moduli from an even bin partition of [0.97, 1.03].
    constexpr double kLo = 0.97, kHi = 1.03, kGap = 0.012;
    const double width = (kHi - kLo) / k;
    std::vector<double> moduli;
    for (int i = 0; i < k; ++i) {
        std::uniform_real_distribution<double> bin(kLo + i * width + kGap / 2,
                                                   kLo + (i + 1) * width - kGap / 2);
        moduli.push_back(bin(rng));
    }
    std::shuffle(moduli.begin(), moduli.end(), rng);

    std::bernoulli_distribution flip(0.5);
    std::bernoulli_distribution jordan(0.25);
    bool used_jordan = false;
    SystemSpec system;
    for (int f = 0; f < k; ++f) {
        const int d = family_dims[static_cast<std::size_t>(f)];
        const double modulus = moduli[static_cast<std::size_t>(f)];
        if (d == 2 && !used_jordan && jordan(rng)) {
            system.blocks.push_back(
                {Eigenvalue{modulus, flip(rng) ? Phase::exact(0, 1) : Phase::exact(1, 2)}, 2});
            used_jordan = true;
            continue;
        }
        // d singleton eigenvalues with distinct exact phases over a common
        // denominator; pairwise gaps are multiples of 1/q of a turn.
        std::uniform_int_distribution<int> q_dist(std::max(d, 2), max_phase_den);
        const int q = q_dist(rng);
        std::vector<int> numerators(static_cast<std::size_t>(q));
        std::iota(numerators.begin(), numerators.end(), -(q - 1) / 2);
        std::shuffle(numerators.begin(), numerators.end(), rng);
        for (int i = 0; i < d; ++i) {
            system.blocks.push_back(
                {Eigenvalue{modulus, Phase::exact(numerators[static_cast<std::size_t>(i)], q)}, 1});
        }
    }

    system.C = random_output_row(rng, [&] {
        std::vector<int> all;
        for (const auto& b : system.blocks) all.push_back(b.size);
        return all;
    }());
    return system;
}

}  // namespace sampleobs
