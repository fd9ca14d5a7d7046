#include "sampleobs/sysmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sampleobs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (a * b) mod m without overflow, result in [0, m).
std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    __int128 r = static_cast<__int128>(a) * b % m;
    if (r < 0) r += m;
    return static_cast<std::int64_t>(r);
}

ExactPhase normalize_exact(std::int64_t p, std::int64_t q) {
    if (q == 0) throw std::invalid_argument("exact phase: zero denominator");
    if (q < 0) {
        p = -p;
        q = -q;
    }
    p %= q;
    if (p < 0) p += q;  // p in [0, q)
    std::int64_t g = std::gcd(p, q);
    if (g > 1) {
        p /= g;
        q /= g;
    }
    if (2 * p > q) p -= q;  // into (-q/2, q/2]
    return ExactPhase{p, q};
}

}  // namespace

double wrap_angle(double radians) {
    double r = std::remainder(radians, kTwoPi);
    if (r <= -std::numbers::pi) r += kTwoPi;
    return r;
}

Phase Phase::exact(std::int64_t p, std::int64_t q) {
    Phase ph;
    ph.rep_ = normalize_exact(p, q);
    return ph;
}

Phase Phase::radians(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("phase: non-finite radians");
    Phase ph;
    ph.rep_ = wrap_angle(value);
    return ph;
}

double Phase::value() const {
    if (const auto* e = std::get_if<ExactPhase>(&rep_)) {
        return kTwoPi * static_cast<double>(e->p) / static_cast<double>(e->q);
    }
    return std::get<double>(rep_);
}

Phase Phase::times(std::int64_t k) const {
    if (const auto* e = std::get_if<ExactPhase>(&rep_)) {
        std::int64_t kk = k % e->q;
        return Phase::exact(mulmod(kk < 0 ? kk + e->q : kk, ((e->p % e->q) + e->q) % e->q, e->q), e->q);
    }
    return Phase::radians(wrap_angle(static_cast<double>(k) * std::get<double>(rep_)));
}

std::complex<double> Eigenvalue::value() const {
    return std::polar(modulus, phase.value());
}

Eigenvalue Eigenvalue::from_complex(std::complex<double> z) {
    return Eigenvalue{std::abs(z), Phase::radians(std::atan2(z.imag(), z.real()))};
}

Eigenvalue Eigenvalue::real(double x) {
    if (x >= 0.0) return Eigenvalue{x, Phase::exact(0, 1)};
    return Eigenvalue{-x, Phase::exact(1, 2)};
}

int SystemSpec::block_start(int block_index) const {
    int s = 0;
    for (int i = 0; i < block_index; ++i) s += blocks[static_cast<std::size_t>(i)].size;
    return s;
}

int SystemSpec::input_count() const {
    if (B) return static_cast<int>(B->cols());
    if (D) return static_cast<int>(D->cols());
    return 0;
}

int dimension(const SystemSpec& system) {
    int n = 0;
    for (const auto& b : system.blocks) n += b.size;
    return n;
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::manual: return "manual";
        case Provenance::regular: return "regular";
        case Provenance::second_order: return "second_order";
        case Provenance::real_eigs: return "real_eigs";
        case Provenance::third_order: return "third_order";
        case Provenance::doubling: return "doubling";
        case Provenance::oracle: return "oracle";
    }
    return "manual";
}

std::optional<Provenance> provenance_from_string(const std::string& s) {
    for (Provenance p : {Provenance::manual, Provenance::regular, Provenance::second_order,
                         Provenance::real_eigs, Provenance::third_order, Provenance::doubling,
                         Provenance::oracle}) {
        if (to_string(p) == s) return p;
    }
    return std::nullopt;
}

Schedule Schedule::from_instants(std::vector<std::int64_t> instants, Provenance provenance) {
    std::sort(instants.begin(), instants.end());
    instants.erase(std::unique(instants.begin(), instants.end()), instants.end());
    if (!instants.empty() && instants.front() < 0) {
        throw std::invalid_argument("schedule: negative sample instant");
    }
    return Schedule{std::move(instants), provenance};
}

bool eigenvalues_equal(const Eigenvalue& a, const Eigenvalue& b, double rel_tol) {
    const std::complex<double> za = a.value();
    const std::complex<double> zb = b.value();
    const double scale = std::max(std::abs(za), std::abs(zb));
    return std::abs(za - zb) <= rel_tol * std::max(scale, 1e-300);
}

ValidationResult validate(const SystemSpec& system) {
    ValidationResult result;
    auto add = [&result](std::string assumption, std::string message) {
        result.violations.push_back({std::move(assumption), std::move(message)});
    };

    const int n = dimension(system);
    if (system.blocks.empty() || n < 1) {
        add("dimension", "system must have at least one Jordan block");
        return result;
    }
    if (n > kMaxDimension) {
        std::ostringstream os;
        os << "state dimension " << n << " exceeds the supported cap " << kMaxDimension;
        add("dimension_cap", os.str());
    }
    for (std::size_t i = 0; i < system.blocks.size(); ++i) {
        if (system.blocks[i].size < 1) {
            std::ostringstream os;
            os << "block " << i << " has nonpositive size";
            add("block_size", os.str());
        }
        if (!(system.blocks[i].eigenvalue.modulus > 0.0)) {
            std::ostringstream os;
            os << "block " << i << " has a zero eigenvalue";
            add("nonzero_eigenvalues", os.str());
        }
    }
    if (static_cast<int>(system.C.size()) != n) {
        std::ostringstream os;
        os << "C has length " << system.C.size() << ", expected " << n;
        add("c_length", os.str());
        return result;  // further index-based checks would be ill-formed
    }

    // Single-output observability of a Jordan pair: block eigenvalues must be
    // pairwise distinct and C must be nonzero at the first column of each block.
    for (std::size_t i = 0; i < system.blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < system.blocks.size(); ++j) {
            if (eigenvalues_equal(system.blocks[i].eigenvalue, system.blocks[j].eigenvalue)) {
                std::ostringstream os;
                os << "blocks " << i << " and " << j << " carry the same eigenvalue";
                add("observable_pair", os.str());
            }
        }
    }
    int col = 0;
    for (std::size_t i = 0; i < system.blocks.size(); ++i) {
        if (system.C[static_cast<std::size_t>(col)] == 0.0) {
            std::ostringstream os;
            os << "C[" << col << "] = 0 at the first column of block " << i;
            add("observable_pair", os.str());
        }
        col += system.blocks[i].size;
    }

    if (system.B && static_cast<int>(system.B->rows()) != n) {
        add("b_rows", "B must have n rows");
    }
    if (system.B && system.D && system.B->cols() != system.D->cols()) {
        add("input_count", "B and D disagree on the number of inputs");
    }
    return result;
}

void require_valid(const SystemSpec& system) {
    const ValidationResult v = validate(system);
    if (!v.ok()) {
        throw std::invalid_argument("invalid system: " + v.violations.front().assumption + ": " +
                                    v.violations.front().message);
    }
}

SystemSpec conjugate(const SystemSpec& system) {
    SystemSpec out = system;
    for (auto& block : out.blocks) {
        const Phase& ph = block.eigenvalue.phase;
        if (const ExactPhase* e = ph.exact_value()) {
            block.eigenvalue.phase = Phase::exact(-e->p, e->q);
        } else {
            block.eigenvalue.phase = Phase::radians(wrap_angle(-ph.value()));
        }
    }
    return out;
}

}  // namespace sampleobs
