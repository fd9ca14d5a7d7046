#include "sampleobs/json_io.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sampleobs {

using nlohmann::json;

namespace {

Phase phase_from_json(const json& j) {
    if (j.contains("exact")) {
        const auto& e = j.at("exact");
        if (!e.is_array() || e.size() != 2) {
            throw std::invalid_argument("phase.exact must be [p, q]");
        }
        return Phase::exact(e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>());
    }
    if (j.contains("radians")) {
        return Phase::radians(j.at("radians").get<double>());
    }
    throw std::invalid_argument("phase must contain \"exact\" or \"radians\"");
}

json phase_to_json(const Phase& phase) {
    if (const ExactPhase* e = phase.exact_value()) {
        return json{{"exact", {e->p, e->q}}};
    }
    return json{{"radians", phase.value()}};
}

json complex_vector_to_json(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}

}  // namespace

SystemSpec system_from_json(const json& j) {
    SystemSpec system;
    for (const json& jb : j.at("blocks")) {
        JordanBlock block;
        block.size = jb.value("size", 1);
        if (jb.contains("complex")) {
            const auto& z = jb.at("complex");
            if (!z.is_array() || z.size() != 2) {
                throw std::invalid_argument("block.complex must be [re, im]");
            }
            block.eigenvalue = Eigenvalue::from_complex(
                {z.at(0).get<double>(), z.at(1).get<double>()});
        } else {
            block.eigenvalue.modulus = jb.at("modulus").get<double>();
            block.eigenvalue.phase = phase_from_json(jb.at("phase"));
        }
        system.blocks.push_back(block);
    }
    system.C = j.at("C").get<std::vector<double>>();
    if (j.contains("B")) {
        const auto rows = j.at("B").get<std::vector<std::vector<double>>>();
        if (!rows.empty()) {
            Eigen::MatrixXd b(rows.size(), rows.front().size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r].size() != rows.front().size()) {
                    throw std::invalid_argument("B rows have inconsistent lengths");
                }
                for (std::size_t c = 0; c < rows[r].size(); ++c) {
                    b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
                }
            }
            system.B = std::move(b);
        }
    }
    if (j.contains("D")) {
        const auto d = j.at("D").get<std::vector<double>>();
        Eigen::RowVectorXd row(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) row(static_cast<Eigen::Index>(i)) = d[i];
        system.D = std::move(row);
    }
    return system;
}

json system_to_json(const SystemSpec& system) {
    json blocks = json::array();
    for (const JordanBlock& block : system.blocks) {
        blocks.push_back({{"modulus", block.eigenvalue.modulus},
                          {"phase", phase_to_json(block.eigenvalue.phase)},
                          {"size", block.size}});
    }
    json j{{"blocks", std::move(blocks)}, {"C", system.C}};
    if (system.B) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < system.B->rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < system.B->cols(); ++c) row.push_back((*system.B)(r, c));
            rows.push_back(std::move(row));
        }
        j["B"] = std::move(rows);
    }
    if (system.D) {
        json row = json::array();
        for (Eigen::Index c = 0; c < system.D->cols(); ++c) row.push_back((*system.D)(c));
        j["D"] = std::move(row);
    }
    return j;
}

Schedule schedule_from_json(const json& j) {
    const json& src = j.contains("schedule") && j.at("schedule").is_array() ? j.at("schedule")
                                                                            : j.at("instants");
    Schedule schedule =
        Schedule::from_instants(src.get<std::vector<std::int64_t>>(), Provenance::manual);
    if (j.contains("provenance")) {
        const auto p = provenance_from_string(j.at("provenance").get<std::string>());
        if (!p) throw std::invalid_argument("unknown provenance tag");
        schedule.provenance = *p;
    }
    return schedule;
}

json schedule_to_json(const Schedule& schedule) {
    return json{{"instants", schedule.instants}, {"provenance", to_string(schedule.provenance)}};
}

json validation_to_json(const ValidationResult& result) {
    json violations = json::array();
    for (const Violation& v : result.violations) {
        violations.push_back({{"assumption", v.assumption}, {"message", v.message}});
    }
    return json{{"ok", result.ok()}, {"violations", std::move(violations)}};
}

json pathology_to_json(const PathologyReport& report) {
    json pairs = json::array();
    for (const PairPathology& pair : report.pairs) {
        json jp{{"p", pair.p}, {"q", pair.q}, {"exact", pair.exact}};
        jp["h_bar"] = pair.minimal_period ? json(*pair.minimal_period) : json(nullptr);
        pairs.push_back(std::move(jp));
    }
    return json{{"h_max", report.h_max},
                {"tol", report.tol},
                {"pairs", std::move(pairs)},
                {"global_minimal_periods", report.global_minimal_periods}};
}

json observability_to_json(const ObservabilityReport& report) {
    json j{{"rank", report.rank},
           {"n", report.n},
           {"observable", report.observable},
           {"scaled_singular_values", report.scaled_singular_values},
           {"tolerance", report.tolerance}};
    j["witness"] = report.witness ? complex_vector_to_json(*report.witness) : json(nullptr);
    return j;
}

json scheme_result_to_json(const SchemeResult& result) {
    json conditions = json::array();
    for (const ConditionCheck& c : result.conditions_checked) {
        conditions.push_back({{"name", c.name}, {"ok", c.ok}});
    }
    return json{{"scheme", result.scheme},
                {"schedule", result.schedule.instants},
                {"provenance", to_string(result.schedule.provenance)},
                {"guarantee", result.guarantee},
                {"sample_count_bound", result.sample_count_bound},
                {"conditions", std::move(conditions)}};
}

json window_study_to_json(const WindowStudy& study) {
    return json{{"t0", study.t0},
                {"T", study.T},
                {"min_observable_size", study.min_observable_size},
                {"max_failing_subset_size", study.max_failing_subset_size},
                {"failing_witness", study.failing_witness},
                {"exhaustive", study.exhaustive},
                {"subsets_evaluated", study.subsets_evaluated}};
}

json reconstruction_to_json(const ReconstructionResult& result) {
    json x0 = json::array();
    for (Eigen::Index i = 0; i < result.x0_estimate.size(); ++i) {
        x0.push_back({result.x0_estimate(i).real(), result.x0_estimate(i).imag()});
    }
    return json{{"x0", std::move(x0)},
                {"residual", result.residual},
                {"imag_norm", result.imag_norm},
                {"unique", result.unique},
                {"rank_report", observability_to_json(result.rank_report)}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
    const std::size_t m = trajectory.inputs.empty()
                              ? 0
                              : static_cast<std::size_t>(trajectory.inputs.front().size());
    os << "t,y";
    for (std::size_t i = 1; i <= m; ++i) os << ",u_" << i;
    os << "\n";
    os.precision(17);
    for (std::size_t t = 0; t < trajectory.outputs.size(); ++t) {
        os << t << "," << trajectory.outputs[t].real();
        if (m > 0) {
            const Eigen::VectorXd& u = trajectory.inputs[t];
            for (Eigen::Index i = 0; i < u.size(); ++i) os << "," << u(i);
        }
        os << "\n";
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

SampleSeries read_samples_csv(std::istream& is) {
    SampleSeries series;
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() < 2) throw std::invalid_argument("samples CSV: expected t,y");
        series.instants.push_back(std::stoll(fields[0]));
        series.values.push_back(std::stod(fields[1]));
    }
    return series;
}

std::vector<Eigen::VectorXd> read_inputs_csv(std::istream& is) {
    std::vector<Eigen::VectorXd> inputs;
    std::string line;
    bool header = true;
    std::size_t m = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (header) {
            header = false;
            if (fields.size() < 2) throw std::invalid_argument("inputs CSV: expected t,u_1..u_m");
            m = fields.size() - 1;
            continue;
        }
        if (fields.size() != m + 1) {
            throw std::invalid_argument("inputs CSV: inconsistent column count");
        }
        const std::int64_t t = std::stoll(fields[0]);
        if (t != static_cast<std::int64_t>(inputs.size())) {
            throw std::invalid_argument("inputs CSV: t must be consecutive from 0");
        }
        Eigen::VectorXd u(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i) u(static_cast<Eigen::Index>(i)) = std::stod(fields[i + 1]);
        inputs.push_back(std::move(u));
    }
    return inputs;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace sampleobs
