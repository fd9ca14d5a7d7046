// json_io.hpp — stable JSON/CSV formats for systems, schedules and reports.
#pragma once

#include "sampleobs/oracle.hpp"
#include "sampleobs/scheduler.hpp"
#include "sampleobs/simkit.hpp"
#include "sampleobs/spectral.hpp"
#include "sampleobs/sysmodel.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace sampleobs {

// System file:
//   {"blocks":[{"modulus":0.7981,"phase":{"exact":[p,q]},"size":1}, ...],
//    "C":[...], "B":[[...]], "D":[...]}
// phase is {"exact":[p,q]} (2*pi*p/q) or {"radians":x}; the convenience key
// "complex":[re,im] on a block converts to polar at parse time.
SystemSpec system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const SystemSpec& system);

// Schedule file: {"instants":[...],"provenance":"..."}; a SchemeResult file
// (with its "schedule" array) is accepted too.
Schedule schedule_from_json(const nlohmann::json& j);
nlohmann::json schedule_to_json(const Schedule& schedule);

nlohmann::json validation_to_json(const ValidationResult& result);
nlohmann::json pathology_to_json(const PathologyReport& report);
nlohmann::json observability_to_json(const ObservabilityReport& report);
nlohmann::json scheme_result_to_json(const SchemeResult& result);
nlohmann::json window_study_to_json(const WindowStudy& study);
nlohmann::json reconstruction_to_json(const ReconstructionResult& result);

// Trajectory CSV: header t,y,u_1..u_m (t,y when autonomous). Complex outputs
// are written as their real part; callers should check imaginary content.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

// Samples CSV: header t,y.
struct SampleSeries {
    std::vector<std::int64_t> instants;
    std::vector<std::complex<double>> values;
};
SampleSeries read_samples_csv(std::istream& is);

// Inputs CSV: header t,u_1..u_m with consecutive t starting at 0.
std::vector<Eigen::VectorXd> read_inputs_csv(std::istream& is);

std::string read_file(const std::string& path);

}  // namespace sampleobs
