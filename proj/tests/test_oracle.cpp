#include "sampleobs/oracle.hpp"

#include "sampleobs/errors.hpp"
#include "sampleobs/scheduler.hpp"
#include "sampleobs/spectral.hpp"
#include "support/builders.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>

using namespace sampleobs;
using sampleobs::testing::diag_real;
using sampleobs::testing::eight_of_nine_instants;
using sampleobs::testing::ninth_order_roots_system;

TEST_CASE("min_samples_in_window: period-2 pair in a window of 8") {
    const SystemSpec s = diag_real({0.5, -0.5});
    const WindowStudy study = min_samples_in_window(s, 0, 8);
    CHECK(study.exhaustive);
    CHECK(study.min_observable_size == 5);  // ceil(1 + 8/2)
    CHECK(study.max_failing_subset_size == 4);
    CHECK(study.failing_witness == std::vector<std::int64_t>{0, 2, 4, 6});
}

TEST_CASE("min_samples_in_window: benign pair needs two samples") {
    const SystemSpec s = diag_real({0.3, 0.6});
    const WindowStudy study = min_samples_in_window(s, 0, 8);
    CHECK(study.min_observable_size == 2);
    CHECK(study.max_failing_subset_size == 1);
}

TEST_CASE("min_samples_in_window: cube-roots system over nine instants") {
    const SystemSpec s = make_worst_case_system(3, 0.343);
    const WindowStudy study = min_samples_in_window(s, 0, 9);
    CHECK(study.min_observable_size == 7);  // 1 + ceil(2*9/3)
    CHECK(study.max_failing_subset_size == 6);
    CHECK(rank_verdict(s, Schedule::from_instants(study.failing_witness)).rank < 3);
}

TEST_CASE("serial and parallel enumeration agree") {
    for (const SystemSpec& s : {diag_real({0.5, -0.5}), make_worst_case_system(3, 0.343),
                                diag_real({0.4, 0.7, 1.05})}) {
        const WindowStudy serial = min_samples_in_window(s, 0, 9, 0, 0, Execution::serial);
        const WindowStudy parallel = min_samples_in_window(s, 0, 9, 0, 0, Execution::parallel);
        CHECK(serial.min_observable_size == parallel.min_observable_size);
        CHECK(serial.max_failing_subset_size == parallel.max_failing_subset_size);
        CHECK(serial.failing_witness == parallel.failing_witness);
        CHECK(serial.subsets_evaluated == parallel.subsets_evaluated);
    }
}

TEST_CASE("sampled mode is deterministic under a fixed seed") {
    const SystemSpec s = ninth_order_roots_system();
    const WindowStudy a = min_samples_in_window(s, 0, 30, 2000, 99, Execution::parallel);
    const WindowStudy b = min_samples_in_window(s, 0, 30, 2000, 99, Execution::serial);
    CHECK_FALSE(a.exhaustive);
    CHECK(a.max_failing_subset_size == b.max_failing_subset_size);
    CHECK(a.failing_witness == b.failing_witness);
}

TEST_CASE("check_bound_second_order") {
    CHECK(check_bound_second_order(diag_real({0.5, -0.5}), 0, 8).pass);
    CHECK(check_bound_second_order(diag_real({0.5, -0.5}), 0, 8).threshold == 5);
    CHECK(check_bound_second_order(diag_real({0.3, 0.6}), 0, 8).threshold == 2);
    CHECK(check_bound_second_order(diag_real({0.3, 0.6}), 0, 8).pass);
    CHECK_THROWS_AS(check_bound_second_order(diag_real({0.3, 0.6, 0.9}), 0, 8), WrongDimension);
}

TEST_CASE("check_bound_remark3") {
    const BoundCheck mixed = check_bound_remark3(diag_real({0.5, -0.5, 0.9}), 0, 6);
    CHECK(mixed.threshold == 4);  // ceil((2 + 6)/2)
    CHECK(mixed.pass);

    const BoundCheck positive = check_bound_remark3(diag_real({0.3, 0.6, 0.9}), 0, 6);
    CHECK(positive.threshold == 3);
    CHECK(positive.pass);

    const BoundCheck two_pairs = check_bound_remark3(diag_real({0.5, -0.5, 0.7, -0.7}), 0, 8);
    CHECK(two_pairs.threshold == 6);  // ceil((4 + 8)/2)
    CHECK(two_pairs.pass);

    CHECK_THROWS_AS(
        check_bound_remark3(diag_real({0.5, -0.5, 0.9}), 0, 4), NotApplicable);  // T < 2n
}

TEST_CASE("check_theorem1 holds over random trials") {
    const TrialReport report = check_theorem1(40, 12345);
    CHECK(report.trials == 40);
    CHECK(report.failures == 0);
}

TEST_CASE("check_lemma4_equivalence on the cube-roots system") {
    const SystemSpec s = make_worst_case_system(3, 0.343);
    CHECK(check_lemma4_equivalence(s, 9));
    CHECK(check_lemma4_equivalence(s, 12));
    CHECK_THROWS_AS(check_lemma4_equivalence(diag_real({0.5, 0.7, 0.9}), 9), NotWorstCaseSystem);
}

TEST_CASE("eight-of-nine fixture: rank 8, completed by any residue-8 instant") {
    const SystemSpec s = ninth_order_roots_system();
    const std::vector<std::int64_t> pattern = eight_of_nine_instants();
    CHECK(rank_verdict(s, Schedule::from_instants(pattern)).rank == 8);

    for (std::int64_t extra : {8, 17, 26, 80}) {
        std::vector<std::int64_t> completed = pattern;
        completed.push_back(extra);
        CHECK(rank_verdict(s, Schedule::from_instants(completed)).rank == 9);
    }
}

TEST_CASE("period-2 lattice: every even schedule up to 22 is rank one") {
    const SystemSpec s = diag_real({0.5, -0.5});
    std::vector<std::int64_t> lattice;
    for (std::int64_t t = 0; t <= 22; t += 2) lattice.push_back(t);
    const std::uint64_t limit = std::uint64_t{1} << lattice.size();
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        std::vector<std::int64_t> instants;
        for (std::size_t i = 0; i < lattice.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) instants.push_back(lattice[i]);
        }
        CHECK(rank_verdict(s, Schedule::from_instants(instants)).rank == 1);
    }
}

TEST_CASE("oracle bookkeeping agrees with rank_verdict") {
    std::mt19937_64 rng(67);
    std::uniform_int_distribution<int> tbar_dist(1, 4);
    int done = 0;
    while (done < 20) {
        const SystemSpec s = random_exact_mixed_system(rng, 3);
        if (!validate(s).ok()) continue;
        const PathologyReport report = pathology_report(s);
        std::int64_t t_bar = tbar_dist(rng);
        while (is_pathological_period(report, t_bar)) ++t_bar;
        const Schedule schedule = scheme_regular(s, 0, t_bar, report).schedule;
        CHECK(rank_verdict(s, schedule).observable);

        const std::int64_t T = schedule.instants.back() + 1;
        if (T > 14) continue;
        const WindowStudy study = min_samples_in_window(s, 0, T);
        // The reported maximal failing subset really is deficient, and padding
        // the scheme schedule up to the certified size stays observable.
        CHECK_FALSE(rank_verdict(s, Schedule::from_instants(study.failing_witness)).observable);
        std::vector<std::int64_t> padded = schedule.instants;
        for (std::int64_t t = 0; t < T &&
             static_cast<std::int64_t>(padded.size()) < study.min_observable_size; ++t) {
            if (std::find(padded.begin(), padded.end(), t) == padded.end()) padded.push_back(t);
        }
        CHECK(rank_verdict(s, Schedule::from_instants(padded)).observable);
        ++done;
    }
}

TEST_CASE("make_worst_case_system validates and matches its definition") {
    const SystemSpec s = make_worst_case_system(4, 0.5);
    CHECK(validate(s).ok());
    CHECK(dimension(s) == 4);
    // A^4 = 0.5 I: the row at t = 4 must be 0.5 * C.
    const Eigen::RowVectorXcd row = raw_row_at(s, 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(row(i) - std::complex<double>(0.5, 0.0)) <= 1e-12);
    }
    CHECK_THROWS_AS(make_worst_case_system(3, 1.5), std::invalid_argument);
}

TEST_CASE("random generators produce valid systems") {
    std::mt19937_64 rng(71);
    RealSystemOptions opts;
    opts.allow_opposite_pairs = true;
    for (int trial = 0; trial < 50; ++trial) {
        const SystemSpec real = random_real_system(rng, opts);
        CHECK(validate(real).ok());
        CHECK(has_real_spectrum(real));

        const SystemSpec mixed = random_exact_mixed_system(rng, 2 + trial % 5);
        CHECK(validate(mixed).ok());
        CHECK(dimension(mixed) == 2 + trial % 5);
    }
}
