// sysmodel.hpp — system, schedule and report data model for sample-based
// observability analysis of discrete-time LTI systems in Jordan form.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sampleobs {

inline constexpr std::int64_t kDefaultHMax = 1024;
inline constexpr double kDefaultTol = 1e-9;
// Desk-scale cap; binomial/log-power machinery is sized for k < n <= 32.
inline constexpr int kMaxDimension = 32;

// Phase as an exact rational multiple of a full turn: value = 2*pi*p/q.
// Stored reduced with q >= 1 and -q/2 < p <= q/2.
struct ExactPhase {
    std::int64_t p = 0;
    std::int64_t q = 1;

    friend bool operator==(const ExactPhase&, const ExactPhase&) = default;
};

// Angle of an eigenvalue, either exact-rational or plain radians in (-pi, pi].
class Phase {
  public:
    Phase() : rep_(0.0) {}

    static Phase exact(std::int64_t p, std::int64_t q);
    static Phase radians(double value);

    bool is_exact() const { return std::holds_alternative<ExactPhase>(rep_); }
    const ExactPhase* exact_value() const { return std::get_if<ExactPhase>(&rep_); }

    // Value in radians, normalized to (-pi, pi].
    double value() const;

    // Phase of the k-th power, wrapped back into (-pi, pi]. Exactness is
    // preserved: an exact phase stays exact under integer powers.
    Phase times(std::int64_t k) const;

    bool operator==(const Phase& other) const { return rep_ == other.rep_; }

  private:
    std::variant<ExactPhase, double> rep_;
};

// Wrap an angle into (-pi, pi].
double wrap_angle(double radians);

struct Eigenvalue {
    double modulus = 0.0;  // must be > 0 for a valid system
    Phase phase;

    std::complex<double> value() const;

    static Eigenvalue from_complex(std::complex<double> z);
    static Eigenvalue real(double x);  // phase 0 or pi depending on sign
};

struct JordanBlock {
    Eigenvalue eigenvalue;
    int size = 1;
};

// MISO LTI system given directly in Jordan canonical form: a list of Jordan
// blocks plus the output row C (length n = sum of block sizes). B and D are
// optional input matrices for forced simulation.
struct SystemSpec {
    std::vector<JordanBlock> blocks;
    std::vector<double> C;
    std::optional<Eigen::MatrixXd> B;   // n x m
    std::optional<Eigen::RowVectorXd> D;  // 1 x m

    int block_start(int block_index) const;
    int input_count() const;  // m, 0 when no B/D given
};

int dimension(const SystemSpec& system);

enum class Provenance {
    manual,
    regular,
    second_order,
    real_eigs,
    third_order,
    doubling,
    oracle,
};

std::string to_string(Provenance p);
std::optional<Provenance> provenance_from_string(const std::string& s);

// Strictly increasing list of nonnegative sample instants.
struct Schedule {
    std::vector<std::int64_t> instants;
    Provenance provenance = Provenance::manual;

    // Sorts, deduplicates and checks nonnegativity.
    static Schedule from_instants(std::vector<std::int64_t> instants,
                                  Provenance provenance = Provenance::manual);

    std::size_t size() const { return instants.size(); }
};

struct Violation {
    std::string assumption;  // machine-readable name of the broken rule
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the standing assumptions: nonzero eigenvalues, single-output
// observability of the Jordan pair (distinct block eigenvalues, nonzero C
// entry at the first column of each block), consistent dimensions.
ValidationResult validate(const SystemSpec& system);

// Throws std::invalid_argument with the first violation when invalid.
void require_valid(const SystemSpec& system);

// Relative comparison used for duplicate-eigenvalue detection.
bool eigenvalues_equal(const Eigenvalue& a, const Eigenvalue& b, double rel_tol = kDefaultTol);

// Same system with all phases negated; used for conjugation-sensitivity checks.
SystemSpec conjugate(const SystemSpec& system);

struct ObservabilityReport {
    int rank = 0;
    int n = 0;
    bool observable = false;
    std::vector<double> scaled_singular_values;  // descending, first = 1
    double tolerance = 0.0;                      // relative threshold used
    std::optional<Eigen::VectorXcd> witness;     // near-null direction when rank < n
};

}  // namespace sampleobs
