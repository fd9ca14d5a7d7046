// sampleobs — command-line front end.
//
// Exit codes: 0 success, 1 parse/IO error, 2 validation failure, 3 negative
// analysis verdict, 4 scheme precondition failure.

#include "CLI11.hpp"

#include "sampleobs/errors.hpp"
#include "sampleobs/json_io.hpp"
#include "sampleobs/oracle.hpp"
#include "sampleobs/scheduler.hpp"
#include "sampleobs/simkit.hpp"
#include "sampleobs/spectral.hpp"
#include "sampleobs/sysmodel.hpp"

#include <nlohmann/json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;
using namespace sampleobs;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNegative = 3;
constexpr int kExitScheme = 4;

struct GlobalOptions {
    double tol = kDefaultTol;
    std::int64_t h_max = kDefaultHMax;
    std::string output_path;
    bool timestamps = false;
    int jobs = 0;
};

void emit(const GlobalOptions& opts, json j) {
    if (opts.timestamps) {
        const auto now = std::chrono::system_clock::now();
        j["timestamp"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    const std::string text = j.dump(2) + "\n";
    if (opts.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.output_path);
        if (!out) throw std::runtime_error("cannot write " + opts.output_path);
        out << text;
    }
}

SystemSpec load_system(const std::string& path) {
    return system_from_json(json::parse(read_file(path)));
}

Schedule load_schedule(const std::string& path) {
    return schedule_from_json(json::parse(read_file(path)));
}

// Checks validity and reports violations on the standard error stream.
bool check_valid(const GlobalOptions& opts, const SystemSpec& system) {
    const ValidationResult v = validate(system);
    if (!v.ok()) {
        emit(opts, json{{"validation", validation_to_json(v)}});
    }
    return v.ok();
}

std::vector<std::complex<double>> parse_x0(const std::string& text) {
    std::vector<std::complex<double>> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        std::erase(token, ' ');
        if (token.empty()) throw std::invalid_argument("empty x0 entry");
        if (token.back() == 'i' || token.back() == 'I') {
            token.pop_back();
            // split "a+bi" / "a-bi" / "bi"
            std::size_t split = token.find_last_of("+-");
            if (split == std::string::npos || split == 0) {
                const double im = token.empty() || token == "+" || token == "-"
                                      ? (token == "-" ? -1.0 : 1.0)
                                      : std::stod(token);
                values.emplace_back(0.0, im);
            } else {
                const double re = std::stod(token.substr(0, split));
                std::string im_part = token.substr(split);
                const double im = im_part == "+" ? 1.0 : im_part == "-" ? -1.0 : std::stod(im_part);
                values.emplace_back(re, im);
            }
        } else {
            values.emplace_back(std::stod(token), 0.0);
        }
    }
    return values;
}

int run(int argc, char** argv) {
    CLI::App app{"sample-based observability of discrete-time LTI systems"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--tol", opts.tol, "numeric tolerance forwarded to every module");
    app.add_option("--h-max", opts.h_max, "search bound for pathological periods");
    app.add_option("-o,--output", opts.output_path, "write the report here instead of stdout");
    app.add_flag("--timestamps", opts.timestamps, "add a timestamp field to reports");
    app.add_option("--jobs", opts.jobs, "cap the worker thread count");

    std::string system_path, schedule_path, samples_path, inputs_path;
    std::string x0_text;
    std::int64_t t_max = 0;

    auto* analyze = app.add_subcommand("analyze", "validate and report pathological periods");
    analyze->add_option("system", system_path)->required();

    auto* check = app.add_subcommand("check-schedule", "rank verdict for a schedule");
    check->add_option("system", system_path)->required();
    check->add_option("schedule", schedule_path)->required();

    auto* synth = app.add_subcommand("synthesize", "produce a guaranteed-observable schedule");
    SchemeRequest request;
    std::string scheme_name;
    synth->add_option("system", system_path)->required();
    synth->add_option("--scheme", scheme_name, "second_order|real_eigs|regular|third_order|doubling")
        ->required();
    synth->add_option("--t", request.t, "window start (second_order)");
    synth->add_option("--T", request.T, "window length (second_order)");
    synth->add_option("--t1", request.t1);
    synth->add_option("--t2", request.t2);
    synth->add_option("--tbar", request.t_bar, "regular spacing");
    synth->add_option("--delta", request.delta, "shift (third_order)");
    synth->add_option("--deltas", request.deltas, "shifts (doubling)")->delimiter(',');
    synth->add_option("--candidates", request.candidates, "candidate instants (real_eigs)")
        ->delimiter(',');

    auto* simulate_cmd = app.add_subcommand("simulate", "trajectory CSV for an initial state");
    simulate_cmd->add_option("system", system_path)->required();
    simulate_cmd->add_option("--x0", x0_text, "comma-separated entries, a+bi allowed")->required();
    simulate_cmd->add_option("--tmax", t_max)->required();
    simulate_cmd->add_option("--inputs", inputs_path, "CSV t,u_1..u_m");

    auto* reconstruct_cmd =
        app.add_subcommand("reconstruct", "estimate the initial state from samples");
    reconstruct_cmd->add_option("system", system_path)->required();
    reconstruct_cmd->add_option("schedule", schedule_path)->required();
    reconstruct_cmd->add_option("samples", samples_path)->required();
    reconstruct_cmd->add_option("--inputs", inputs_path, "CSV t,u_1..u_m");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force window studies");
    std::int64_t t0 = 0, window = 0, cap = 0;
    std::uint64_t seed = 0;
    auto* min_samples =
        oracle_cmd->add_subcommand("min-samples", "smallest always-observable subset size");
    min_samples->add_option("system", system_path)->required();
    min_samples->add_option("--t0", t0);
    min_samples->add_option("--window", window)->required();
    min_samples->add_option("--cap", cap, "random draws when the window is too long");
    min_samples->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (opts.jobs > 0) omp_set_num_threads(opts.jobs);
#endif

    if (*analyze) {
        const SystemSpec system = load_system(system_path);
        const ValidationResult v = validate(system);
        if (!v.ok()) {
            emit(opts, json{{"validation", validation_to_json(v)}});
            return kExitValidation;
        }
        const PathologyReport report = pathology_report(system, opts.h_max, opts.tol);
        emit(opts, json{{"validation", validation_to_json(v)},
                        {"pathology", pathology_to_json(report)}});
        return kExitOk;
    }

    if (*check) {
        const SystemSpec system = load_system(system_path);
        if (!check_valid(opts, system)) return kExitValidation;
        const Schedule schedule = load_schedule(schedule_path);
        const double tol_rel = opts.tol == kDefaultTol ? 0.0 : opts.tol;
        const ObservabilityReport report = rank_verdict(system, schedule, tol_rel);
        emit(opts, observability_to_json(report));
        return report.observable ? kExitOk : kExitNegative;
    }

    if (*synth) {
        const SystemSpec system = load_system(system_path);
        if (!check_valid(opts, system)) return kExitValidation;
        const auto scheme = scheme_from_string(scheme_name);
        if (!scheme) {
            std::cerr << "unknown scheme: " << scheme_name << "\n";
            return kExitParse;
        }
        request.scheme = *scheme;
        const PathologyReport report = pathology_report(system, opts.h_max, opts.tol);
        try {
            const SchemeResult result = run_scheme(system, request, report);
            emit(opts, scheme_result_to_json(result));
            return kExitOk;
        } catch (const PathologicalSpacing& e) {
            emit(opts, json{{"error", "PathologicalSpacing"}, {"message", e.what()}});
            return kExitScheme;
        } catch (const PathologicalDelta& e) {
            emit(opts, json{{"error", "PathologicalDelta"},
                            {"message", e.what()},
                            {"delta", e.offending_delta}});
            return kExitScheme;
        } catch (const ConditionCCAViolated& e) {
            emit(opts, json{{"error", "ConditionCCAViolated"}, {"message", e.what()}});
            return kExitScheme;
        } catch (const WrongDimension& e) {
            emit(opts, json{{"error", "WrongDimension"}, {"message", e.what()}});
            return kExitScheme;
        } catch (const NotRealSpectrum& e) {
            emit(opts, json{{"error", "NotRealSpectrum"}, {"message", e.what()}});
            return kExitScheme;
        } catch (const InsufficientCandidates& e) {
            emit(opts, json{{"error", "InsufficientCandidates"}, {"message", e.what()}});
            return kExitScheme;
        }
    }

    if (*simulate_cmd) {
        const SystemSpec system = load_system(system_path);
        if (!check_valid(opts, system)) return kExitValidation;
        const auto entries = parse_x0(x0_text);
        Eigen::VectorXcd x0(static_cast<Eigen::Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i) x0(static_cast<Eigen::Index>(i)) = entries[i];
        std::vector<Eigen::VectorXd> inputs;
        if (!inputs_path.empty()) {
            std::ifstream f(inputs_path);
            if (!f) throw std::runtime_error("cannot open " + inputs_path);
            inputs = read_inputs_csv(f);
        }
        const Trajectory traj = simulate(system, x0, inputs, t_max);
        double max_imag = 0.0;
        for (const auto& y : traj.outputs) max_imag = std::max(max_imag, std::abs(y.imag()));
        if (max_imag > 1e-9) {
            std::cerr << "warning: trajectory has imaginary output content up to " << max_imag
                      << "; the CSV records real parts only\n";
        }
        if (opts.output_path.empty()) {
            write_trajectory_csv(std::cout, traj);
        } else {
            std::ofstream out(opts.output_path);
            if (!out) throw std::runtime_error("cannot write " + opts.output_path);
            write_trajectory_csv(out, traj);
        }
        return kExitOk;
    }

    if (*reconstruct_cmd) {
        const SystemSpec system = load_system(system_path);
        if (!check_valid(opts, system)) return kExitValidation;
        const Schedule schedule = load_schedule(schedule_path);
        std::ifstream sf(samples_path);
        if (!sf) throw std::runtime_error("cannot open " + samples_path);
        const SampleSeries series = read_samples_csv(sf);
        if (series.instants != schedule.instants) {
            std::cerr << "samples CSV instants do not match the schedule\n";
            return kExitParse;
        }
        std::vector<Eigen::VectorXd> inputs;
        if (!inputs_path.empty()) {
            std::ifstream f(inputs_path);
            if (!f) throw std::runtime_error("cannot open " + inputs_path);
            inputs = read_inputs_csv(f);
        }
        const double tol_rel = opts.tol == kDefaultTol ? 0.0 : opts.tol;
        try {
            const ReconstructionResult result =
                reconstruct_initial_state(system, schedule, series.values, inputs, tol_rel);
            emit(opts, reconstruction_to_json(result));
            return result.unique ? kExitOk : kExitNegative;
        } catch (const InconsistentSamples& e) {
            emit(opts, json{{"error", "InconsistentSamples"},
                            {"message", e.what()},
                            {"residual", e.residual}});
            return kExitNegative;
        }
    }

    if (*min_samples) {
        const SystemSpec system = load_system(system_path);
        if (!check_valid(opts, system)) return kExitValidation;
        const double tol_rel = opts.tol == kDefaultTol ? 0.0 : opts.tol;
        const WindowStudy study =
            min_samples_in_window(system, t0, window, cap, seed, Execution::parallel, tol_rel);
        emit(opts, window_study_to_json(study));
        return kExitOk;
    }

    return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
