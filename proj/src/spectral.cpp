#include "sampleobs/spectral.hpp"

#include "sampleobs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sampleobs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

std::optional<PhaseFraction> rationalize_phase_gap(double dphi, std::int64_t h_max, double tol) {
    if (!std::isfinite(dphi)) throw std::invalid_argument("rationalize_phase_gap: non-finite gap");
    if (h_max < 1) throw std::invalid_argument("rationalize_phase_gap: h_max must be positive");

    double x = dphi / kTwoPi;
    x -= std::floor(x);  // into [0, 1)

    // Continued-fraction convergents p_i/q_i of x. Their denominators are the
    // best-approximation candidates; accept the first one whose residual beats
    // the h-scaled tolerance. |q*x - p| * 2*pi is exactly |q*dphi - 2*pi*k|
    // for the k shifted by the integer part dropped above.
    std::int64_t p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    std::int64_t p_cur = 0, q_cur = 1;    // p_0/q_0 for a_0 = floor(x) = 0
    double frac = x;

    for (int iter = 0; iter < 64; ++iter) {
        const double err = std::abs(static_cast<double>(q_cur) * x - static_cast<double>(p_cur));
        if (err * kTwoPi <= tol * static_cast<double>(q_cur)) {
            return PhaseFraction{p_cur, q_cur};  // convergents are already reduced
        }
        if (frac <= 0.0) break;
        const double inv = 1.0 / frac;
        const double a_f = std::floor(inv);
        if (a_f * static_cast<double>(q_cur) + static_cast<double>(q_prev) >
            static_cast<double>(h_max)) {
            break;  // first denominator past the bound
        }
        const std::int64_t a = static_cast<std::int64_t>(a_f);
        frac = inv - a_f;
        const std::int64_t q_next = a * q_cur + q_prev;
        const std::int64_t p_next = a * p_cur + p_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
    }
    return std::nullopt;
}

std::optional<std::int64_t> minimal_pathological_period(const Eigenvalue& a, const Eigenvalue& b,
                                                        std::int64_t h_max, double tol) {
    const double scale = std::max(a.modulus, b.modulus);
    if (std::abs(a.modulus - b.modulus) > tol * scale) return std::nullopt;

    const ExactPhase* ea = a.phase.exact_value();
    const ExactPhase* eb = b.phase.exact_value();
    if (ea && eb) {
        // gap = 2*pi*(pa/qa - pb/qb); the reduced denominator is the minimal
        // period, independently of tol.
        __int128 num = static_cast<__int128>(ea->p) * eb->q - static_cast<__int128>(eb->p) * ea->q;
        const __int128 den = static_cast<__int128>(ea->q) * eb->q;
        if (num < 0) num = -num;
        __int128 g = den;  // gcd(num, den); num == 0 leaves g = den
        for (__int128 r = num; r != 0;) {
            const __int128 t = g % r;
            g = r;
            r = t;
        }
        const __int128 h_bar = den / g;
        if (h_bar == 1) throw DegeneratePair("minimal_pathological_period: equal eigenvalues");
        if (h_bar > h_max) return std::nullopt;
        return static_cast<std::int64_t>(h_bar);
    }

    const double dphi = a.phase.value() - b.phase.value();
    const auto frac = rationalize_phase_gap(dphi, h_max, tol);
    if (!frac) return std::nullopt;
    if (frac->den == 1) throw DegeneratePair("minimal_pathological_period: equal eigenvalues");
    return frac->den;
}

PathologyReport pathology_report(const SystemSpec& system, std::int64_t h_max, double tol) {
    const int b = static_cast<int>(system.blocks.size());
    PathologyReport report;
    report.h_max = h_max;
    report.tol = tol;
    report.pairs.reserve(static_cast<std::size_t>(b) * (b - 1) / 2);
    for (int p = 0; p < b; ++p) {
        for (int q = p + 1; q < b; ++q) {
            report.pairs.push_back({p, q, std::nullopt, false});
        }
    }

    // Pairs are independent; results land in preassigned slots so the merge
    // order is fixed regardless of thread count.
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        PairPathology& pair = report.pairs[i];
        const Eigenvalue& ep = system.blocks[static_cast<std::size_t>(pair.p)].eigenvalue;
        const Eigenvalue& eq = system.blocks[static_cast<std::size_t>(pair.q)].eigenvalue;
        pair.exact = ep.phase.is_exact() && eq.phase.is_exact();
        pair.minimal_period = minimal_pathological_period(ep, eq, h_max, tol);
    }

    std::set<std::int64_t> periods;
    for (const auto& pair : report.pairs) {
        if (pair.minimal_period) periods.insert(*pair.minimal_period);
    }
    report.global_minimal_periods.assign(periods.begin(), periods.end());
    return report;
}

bool is_pathological_period(const PathologyReport& report, std::int64_t t_bar) {
    if (t_bar < 1) throw std::invalid_argument("is_pathological_period: t_bar must be positive");
    return std::any_of(report.global_minimal_periods.begin(), report.global_minimal_periods.end(),
                       [t_bar](std::int64_t h_bar) { return t_bar % h_bar == 0; });
}

}  // namespace sampleobs
