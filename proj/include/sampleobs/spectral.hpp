// spectral.hpp — pathological sampling period detection for eigenvalue pairs.
//
// Two eigenvalues of equal modulus collide under the h-th power exactly when
// their phase gap is a rational multiple 2*pi*k/h of a full turn; every
// pathological h for a pair is then an integer multiple of a minimal period
// h_bar. Detection is exact when both phases are exact rationals and falls
// back to continued-fraction rationalization otherwise.
#pragma once

#include "sampleobs/sysmodel.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sampleobs {

struct PhaseFraction {
    std::int64_t num = 0;  // k, reduced against den
    std::int64_t den = 1;  // h >= 1
};

// Smallest h <= h_max with |h*dphi - 2*pi*k| <= tol*h for some integer k,
// found on the continued-fraction convergents of dphi/(2*pi). Returns the
// reduced fraction k/h; nullopt when no convergent denominator <= h_max fits.
std::optional<PhaseFraction> rationalize_phase_gap(double dphi, std::int64_t h_max, double tol);

// Minimal h with a^h == b^h, up to the search bound. nullopt when the moduli
// differ beyond tol (relative) or no period <= h_max exists. Throws
// DegeneratePair when a == b.
std::optional<std::int64_t> minimal_pathological_period(const Eigenvalue& a, const Eigenvalue& b,
                                                        std::int64_t h_max = kDefaultHMax,
                                                        double tol = kDefaultTol);

struct PairPathology {
    int p = 0;  // block indices, p < q
    int q = 0;
    std::optional<std::int64_t> minimal_period;
    bool exact = false;  // decided in exact rational arithmetic
};

struct PathologyReport {
    std::vector<PairPathology> pairs;  // one per unordered block pair, ordered (p, q)
    std::int64_t h_max = kDefaultHMax;
    double tol = kDefaultTol;
    std::vector<std::int64_t> global_minimal_periods;  // sorted, unique
};

PathologyReport pathology_report(const SystemSpec& system, std::int64_t h_max = kDefaultHMax,
                                 double tol = kDefaultTol);

// True iff some pair's minimal period divides t_bar.
bool is_pathological_period(const PathologyReport& report, std::int64_t t_bar);

}  // namespace sampleobs
