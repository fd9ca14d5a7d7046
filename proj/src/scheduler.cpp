#include "sampleobs/scheduler.hpp"

#include "sampleobs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sampleobs {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Returns the pathological period of the (unique) pair of a second-order
// system, if any.
std::optional<std::int64_t> second_order_period(const SystemSpec& system, std::int64_t h_max,
                                                double tol) {
    if (system.blocks.size() < 2) return std::nullopt;  // one block of size 2
    return minimal_pathological_period(system.blocks[0].eigenvalue, system.blocks[1].eigenvalue,
                                       h_max, tol);
}

bool is_positive_real(const Eigenvalue& ev, double tol) {
    return std::abs(wrap_angle(ev.phase.value())) <= tol;
}

bool is_negative_real(const Eigenvalue& ev, double tol) {
    return std::abs(std::abs(wrap_angle(ev.phase.value())) - std::numbers::pi) <= tol;
}

}  // namespace

bool has_real_spectrum(const SystemSpec& system, double tol) {
    return std::all_of(system.blocks.begin(), system.blocks.end(), [tol](const JordanBlock& b) {
        return is_positive_real(b.eigenvalue, tol) || is_negative_real(b.eigenvalue, tol);
    });
}

int opposite_pair_eigenvalue_count(const SystemSpec& system, double tol) {
    int count = 0;
    for (std::size_t i = 0; i < system.blocks.size(); ++i) {
        const Eigenvalue& a = system.blocks[i].eigenvalue;
        for (std::size_t j = 0; j < system.blocks.size(); ++j) {
            if (i == j) continue;
            const Eigenvalue& b = system.blocks[j].eigenvalue;
            const bool moduli_match =
                std::abs(a.modulus - b.modulus) <= tol * std::max(a.modulus, b.modulus);
            const bool opposite = (is_positive_real(a, tol) && is_negative_real(b, tol)) ||
                                  (is_negative_real(a, tol) && is_positive_real(b, tol));
            if (moduli_match && opposite) {
                ++count;  // counts eigenvalues, each pair contributes twice
                break;
            }
        }
    }
    return count;
}

SchemeResult scheme_second_order(const SystemSpec& system, std::int64_t t, std::int64_t T,
                                 std::int64_t h_max, double tol) {
    require_valid(system);
    const int n = dimension(system);
    if (n != 2) throw WrongDimension("scheme_second_order: system dimension must be 2");
    if (t < 0 || T < 2) {
        throw std::invalid_argument("scheme_second_order: need t >= 0 and window length >= 2");
    }

    SchemeResult result;
    result.scheme = "second_order";
    const auto h_bar = second_order_period(system, h_max, tol);
    result.conditions_checked.push_back({"dimension_is_2", true});
    result.conditions_checked.push_back({"pathological_pair", h_bar.has_value()});

    std::int64_t count = 2;
    if (h_bar) {
        count = 1 + ceil_div(T, *h_bar);
        result.guarantee = "interval bound: 1 + T/h_bar samples in any window defeat the period";
    } else {
        result.guarantee = "non-pathological pair: any two samples";
    }
    if (count > T) count = T;  // h_bar >= 2 keeps the bound within the window

    std::vector<std::int64_t> instants(static_cast<std::size_t>(count));
    std::iota(instants.begin(), instants.end(), t);
    result.schedule = Schedule::from_instants(std::move(instants), Provenance::second_order);
    result.sample_count_bound = count;
    return result;
}

SchemeResult scheme_real_eigs(const SystemSpec& system,
                              const std::vector<std::int64_t>& candidate_instants, double tol) {
    require_valid(system);
    if (!has_real_spectrum(system, tol)) {
        throw NotRealSpectrum("scheme_real_eigs: system has non-real eigenvalues");
    }
    const int n = dimension(system);

    std::vector<std::int64_t> candidates = candidate_instants;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const bool all_positive = std::all_of(
        system.blocks.begin(), system.blocks.end(),
        [tol](const JordanBlock& b) { return is_positive_real(b.eigenvalue, tol); });
    const int n_p = opposite_pair_eigenvalue_count(system, tol);

    SchemeResult result;
    result.scheme = "real_eigs";
    result.conditions_checked.push_back({"real_spectrum", true});

    std::int64_t needed = 0;
    if (all_positive) {
        needed = n;
        result.guarantee = "positive spectrum: any n samples";
        result.conditions_checked.push_back({"positive_spectrum", true});
    } else if (n_p == 0) {
        needed = 2 * n - 1;
        result.guarantee = "no opposite-sign pair: any 2n-1 samples";
        result.conditions_checked.push_back({"no_opposite_sign_pair", true});
    } else {
        if (candidates.empty()) {
            throw InsufficientCandidates("scheme_real_eigs: no candidate instants");
        }
        const std::int64_t span = candidates.back() - candidates.front() + 1;
        const std::int64_t T = std::max<std::int64_t>(span, 2 * n);
        needed = ceil_div(static_cast<std::int64_t>(n_p) + T, 2);
        result.guarantee = "interval bound: (N_p + T)/2 samples in a window of length T >= 2n";
        result.conditions_checked.push_back({"window_at_least_2n", true});
    }

    if (static_cast<std::int64_t>(candidates.size()) < needed) {
        std::ostringstream os;
        os << "scheme_real_eigs: " << needed << " candidates required, got " << candidates.size();
        throw InsufficientCandidates(os.str());
    }
    candidates.resize(static_cast<std::size_t>(needed));
    result.schedule = Schedule::from_instants(std::move(candidates), Provenance::real_eigs);
    result.sample_count_bound = needed;
    return result;
}

SchemeResult scheme_regular(const SystemSpec& system, std::int64_t t1, std::int64_t t_bar,
                            const PathologyReport& report) {
    require_valid(system);
    if (t1 < 0 || t_bar < 1) {
        throw std::invalid_argument("scheme_regular: need t1 >= 0 and t_bar >= 1");
    }
    if (is_pathological_period(report, t_bar)) {
        std::ostringstream os;
        os << "scheme_regular: spacing " << t_bar << " is a pathological period";
        throw PathologicalSpacing(os.str());
    }
    const int n = dimension(system);
    std::vector<std::int64_t> instants;
    instants.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) instants.push_back(t1 + static_cast<std::int64_t>(i) * t_bar);

    SchemeResult result;
    result.scheme = "regular";
    result.guarantee = "regular sampling: n equidistant samples at a non-pathological spacing";
    result.sample_count_bound = n;
    result.conditions_checked.push_back({"spacing_non_pathological", true});
    result.schedule = Schedule::from_instants(std::move(instants), Provenance::regular);
    return result;
}

bool check_condition_CCA(const SystemSpec& system, const PathologyReport& report) {
    // Any Jordan block of size >= 2 contributes a t-linear term to C*A^t that
    // breaks proportionality with C for every t >= 1.
    const bool diagonalizable = std::all_of(system.blocks.begin(), system.blocks.end(),
                                            [](const JordanBlock& b) { return b.size == 1; });
    if (!diagonalizable) return true;

    // C*A^t parallel to C forces lambda_p^t = lambda_q^t for every pair; that
    // needs every pair pathological and t a common multiple of the minimal
    // periods.
    __int128 lcm = 1;
    for (const PairPathology& pair : report.pairs) {
        if (!pair.minimal_period) return true;
        const std::int64_t h = *pair.minimal_period;
        const std::int64_t g = std::gcd(static_cast<std::int64_t>(lcm % h), h);
        lcm = lcm / g * h;
        if (lcm > report.h_max) return true;  // no realizing t within the search bound
    }
    return false;
}

SchemeResult scheme_third_order_irregular(const SystemSpec& system, std::int64_t t1,
                                          std::int64_t t2, std::int64_t delta,
                                          const PathologyReport& report) {
    require_valid(system);
    if (dimension(system) != 3) {
        throw WrongDimension("scheme_third_order_irregular: system dimension must be 3");
    }
    if (t1 < 0 || t2 <= t1) {
        throw std::invalid_argument("scheme_third_order_irregular: need 0 <= t1 < t2");
    }
    if (delta < 1) throw std::invalid_argument("scheme_third_order_irregular: delta must be >= 1");
    if (!check_condition_CCA(system, report)) {
        throw ConditionCCAViolated(
            "scheme_third_order_irregular: C*A^t collapses onto C for some t");
    }
    if (is_pathological_period(report, delta)) {
        std::ostringstream os;
        os << "scheme_third_order_irregular: shift " << delta << " is a pathological period";
        throw PathologicalDelta(os.str(), delta);
    }

    SchemeResult result;
    result.scheme = "third_order";
    result.guarantee = "shifted pair: {t1, t2} plus the same pair shifted by a non-pathological delta";
    result.sample_count_bound = 4;
    result.conditions_checked.push_back({"dimension_is_3", true});
    result.conditions_checked.push_back({"condition_cca", true});
    result.conditions_checked.push_back({"delta_non_pathological", true});
    result.schedule =
        Schedule::from_instants({t1, t2, t1 + delta, t2 + delta}, Provenance::third_order);
    return result;
}

SchemeResult scheme_doubling(const SystemSpec& system, std::pair<std::int64_t, std::int64_t> base,
                             const std::vector<std::int64_t>& deltas,
                             const PathologyReport& report) {
    require_valid(system);
    const int n = dimension(system);
    if (n < 3) throw WrongDimension("scheme_doubling: system dimension must be >= 3");
    if (static_cast<int>(deltas.size()) != n - 2) {
        std::ostringstream os;
        os << "scheme_doubling: expected " << n - 2 << " shifts, got " << deltas.size();
        throw std::invalid_argument(os.str());
    }
    if (base.first < 0 || base.second <= base.first) {
        throw std::invalid_argument("scheme_doubling: need 0 <= t1 < t2");
    }
    if (!check_condition_CCA(system, report)) {
        throw ConditionCCAViolated("scheme_doubling: C*A^t collapses onto C for some t");
    }
    for (std::int64_t delta : deltas) {
        if (delta < 1) throw std::invalid_argument("scheme_doubling: shifts must be >= 1");
        if (is_pathological_period(report, delta)) {
            std::ostringstream os;
            os << "scheme_doubling: shift " << delta << " is a pathological period";
            throw PathologicalDelta(os.str(), delta);
        }
    }

    std::set<std::int64_t> instants{base.first, base.second};
    for (std::int64_t delta : deltas) {
        std::set<std::int64_t> shifted;
        for (std::int64_t t : instants) shifted.insert(t + delta);
        instants.insert(shifted.begin(), shifted.end());
    }

    SchemeResult result;
    result.scheme = "doubling";
    result.guarantee = "shift-doubling: each shifted copy raises the rank by at least one";
    result.sample_count_bound = std::int64_t{1} << (n - 1);
    result.conditions_checked.push_back({"condition_cca", true});
    result.conditions_checked.push_back({"deltas_non_pathological", true});
    result.schedule = Schedule::from_instants(
        std::vector<std::int64_t>(instants.begin(), instants.end()), Provenance::doubling);
    return result;
}

bool WorstCasePredicate::contains_required_set(const Schedule& schedule) const {
    for (std::int64_t t : schedule.instants) {
        if (t < 0 || t > horizon_) {
            throw std::invalid_argument("WorstCasePredicate: instant outside [0, horizon]");
        }
    }
    const std::int64_t n = n_;
    for (std::int64_t anchor : schedule.instants) {
        bool ok = true;
        for (std::int64_t i = 1; i < n && ok; ++i) {
            const std::int64_t want = (anchor + i) % n;
            ok = std::any_of(schedule.instants.begin(), schedule.instants.end(),
                             [&](std::int64_t s) { return s >= anchor + i && s % n == want; });
        }
        if (ok) return true;
    }
    return false;
}

std::int64_t WorstCasePredicate::arbitrary_sample_bound(std::int64_t T) const {
    return 1 + ceil_div(static_cast<std::int64_t>(n_ - 1) * T, n_);
}

std::string WorstCasePredicate::bound_note() const {
    std::ostringstream os;
    os << "arbitrary sampling needs at least 1 + (n-1)*T/n samples per window of length T "
          "(n = "
       << n_ << "), which always includes n consecutive instants";
    return os.str();
}

WorstCasePredicate worst_case_required_sets(const SystemSpec& system, std::int64_t horizon,
                                            double tol) {
    require_valid(system);
    const int n = dimension(system);
    if (static_cast<int>(system.blocks.size()) != n) {
        throw NotWorstCaseSystem("worst_case_required_sets: system is not diagonalizable");
    }
    // All n eigenvalues must be n-th roots of a common value: equal moduli and
    // every pairwise phase gap a multiple of 2*pi/n.
    for (std::size_t i = 0; i < system.blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < system.blocks.size(); ++j) {
            const Eigenvalue& a = system.blocks[i].eigenvalue;
            const Eigenvalue& b = system.blocks[j].eigenvalue;
            if (std::abs(a.modulus - b.modulus) > tol * std::max(a.modulus, b.modulus)) {
                throw NotWorstCaseSystem("worst_case_required_sets: moduli differ");
            }
            const auto h_bar = minimal_pathological_period(a, b, n, tol);
            if (!h_bar || n % *h_bar != 0) {
                throw NotWorstCaseSystem(
                    "worst_case_required_sets: eigenvalues are not n-th roots of a common value");
            }
        }
    }
    if (horizon < 0) throw std::invalid_argument("worst_case_required_sets: negative horizon");
    return WorstCasePredicate(n, horizon);
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::second_order: return "second_order";
        case Scheme::real_eigs: return "real_eigs";
        case Scheme::regular: return "regular";
        case Scheme::third_order: return "third_order";
        case Scheme::doubling: return "doubling";
    }
    return "regular";
}

std::optional<Scheme> scheme_from_string(const std::string& s) {
    for (Scheme scheme : {Scheme::second_order, Scheme::real_eigs, Scheme::regular,
                          Scheme::third_order, Scheme::doubling}) {
        if (to_string(scheme) == s) return scheme;
    }
    return std::nullopt;
}

SchemeResult run_scheme(const SystemSpec& system, const SchemeRequest& request,
                        const PathologyReport& report) {
    switch (request.scheme) {
        case Scheme::second_order:
            return scheme_second_order(system, request.t, request.T, report.h_max, report.tol);
        case Scheme::real_eigs:
            return scheme_real_eigs(system, request.candidates, report.tol);
        case Scheme::regular:
            return scheme_regular(system, request.t1, request.t_bar, report);
        case Scheme::third_order:
            return scheme_third_order_irregular(system, request.t1, request.t2, request.delta,
                                                report);
        case Scheme::doubling:
            return scheme_doubling(system, {request.t1, request.t2}, request.deltas, report);
    }
    throw std::invalid_argument("run_scheme: unknown scheme");
}

}  // namespace sampleobs
