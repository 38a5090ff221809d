#include "commands.hpp"

#include <cstring>
#include <functional>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mwc/error.hpp"
#include "mwc/io.hpp"
#include "mwc/spectral.hpp"
#include "scenario.hpp"

namespace mwcons {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const mwc::Infeasible& e) {
        err << "infeasible: " << e.what() << '\n';
    } catch (const mwc::Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kError;
}

Scenario load(const CommandOptions& opts) {
    if (!opts.scenario) {
        throw mwc::InvalidArgument("--scenario is required");
    }
    return load_scenario(*opts.scenario);
}

std::optional<fs::path> output_dir(const CommandOptions& opts, const Scenario& s) {
    if (opts.out) {
        return opts.out;
    }
    return s.output_dir;
}

void emit(const std::optional<fs::path>& dir, const char* file, const std::string& contents) {
    if (!dir) {
        return;
    }
    fs::create_directories(*dir);
    mwc::write_text_file(*dir / file, contents);
}

double rank_tol(const CommandOptions& opts) { return opts.tol.value_or(mwc::kRankTolerance); }

const AlgorithmSpec& algorithm_of(const Scenario& s) {
    if (!s.algorithm) {
        throw mwc::InvalidArgument("scenario has no algorithm section");
    }
    return *s.algorithm;
}

/// Reports an algorithm/graph mismatch before any work is done.
void check_fits(const AlgorithmSpec& a, const mwc::DirectedGraph& g) {
    switch (a.name) {
        case mwc::Algorithm::gradient:
        case mwc::Algorithm::fixed_step:
        case mwc::Algorithm::metropolis_tv:
            if (!mwc::is_symmetric(g)) {
                throw mwc::InvalidArgument(std::string(mwc::to_string(a.name)) + " needs a symmetric neighbor graph");
            }
            break;
        case mwc::Algorithm::cycle_projection:
            if (!mwc::is_directed_cycle(g)) {
                throw mwc::InvalidArgument("cycle_projection needs a directed cycle");
            }
            break;
        case mwc::Algorithm::general_projection:
            break;
    }
    if (a.schedule && a.name != mwc::Algorithm::metropolis_tv) {
        throw mwc::InvalidArgument("a schedule only applies to metropolis_tv");
    }
    if (a.project_init && a.name != mwc::Algorithm::cycle_projection) {
        throw mwc::InvalidArgument("project_init only applies to cycle_projection");
    }
}

/// Round matrices whose spectra describe the run: one per recurring subgraph
/// for a time-varying schedule, otherwise a single matrix. Gradient uses
/// alpha(0).
std::vector<mwc::Matrix> round_matrices(const AlgorithmSpec& a, const mwc::WeightedNeighborGraph& w) {
    if (a.name == mwc::Algorithm::metropolis_tv && a.schedule) {
        std::vector<mwc::Matrix> out;
        for (std::size_t k : a.schedule->recurring()) {
            out.push_back(mwc::build_update_matrix(a.name, w, {&a.schedule->subgraphs[k], 0.0}));
        }
        return out;
    }
    return {mwc::build_update_matrix(a.name, w, {nullptr, a.stepsize.at(0)})};
}

bool time_invariant(const AlgorithmSpec& a) {
    if (a.name == mwc::Algorithm::gradient) {
        return a.stepsize.form == mwc::StepsizeSchedule::Form::constant;
    }
    return !(a.name == mwc::Algorithm::metropolis_tv && a.schedule && a.schedule->recurring().size() > 1);
}

mwc::Trajectory simulate(const AlgorithmSpec& a, const mwc::WeightedNeighborGraph& w, const mwc::Vector& x0,
                         std::size_t steps) {
    const mwc::RunOptions run{steps, a.stop_at_consensus};
    switch (a.name) {
        case mwc::Algorithm::gradient:
            return mwc::run_gradient(w, x0, a.stepsize, run);
        case mwc::Algorithm::fixed_step:
            return mwc::run_fixed_step(w, x0, run);
        case mwc::Algorithm::metropolis_tv:
            return mwc::run_metropolis_tv(w, x0, a.schedule ? *a.schedule : mwc::Schedule::fixed(w.graph()), run);
        case mwc::Algorithm::cycle_projection:
            return mwc::run_cycle_projection(w, x0, a.project_init, run);
        case mwc::Algorithm::general_projection:
            return mwc::run_general_projection(w, x0, run);
    }
    throw mwc::InvalidArgument("unknown algorithm");
}

json verify_json(const Scenario& s, const CommandOptions& opts, int& code) {
    const mwc::WeightedNeighborGraph w = resolve_weights(s);
    const mwc::WellConfigReport report = mwc::check_well_configured(w, rank_tol(opts));
    code = report.well_configured ? kOk : kNotWellConfigured;
    return json::parse(mwc::format_verify_json(report, s.n));
}

json analyze_json(const Scenario& s, const mwc::WeightedNeighborGraph& w, std::ostream& err) {
    const AlgorithmSpec& a = algorithm_of(s);
    check_fits(a, w.graph());
    json doc = {{"algorithm", mwc::to_string(a.name)}, {"n", s.n}};
    const std::vector<mwc::Matrix> mats = round_matrices(a, w);
    json reports = json::array();
    for (std::size_t k = 0; k < mats.size(); ++k) {
        const mwc::SpectralReport r = mwc::spectral_report(mats[k], s.n);
        if (r.degenerate) {
            err << "warning: round matrix " << k << " is the identity; no arc carries information\n";
        }
        reports.push_back(json::parse(mwc::format_spectral_json(r)));
    }
    if (a.name == mwc::Algorithm::metropolis_tv && a.schedule) {
        json subs = json::array();
        const auto recurring = a.schedule->recurring();
        for (std::size_t k = 0; k < recurring.size(); ++k) {
            json entry = reports[k];
            entry["subgraph"] = recurring[k];
            subs.push_back(std::move(entry));
        }
        doc["subgraphs"] = std::move(subs);
        doc["covers_graph"] = a.schedule->covers(w.graph());
    } else {
        doc["update"] = reports[0];
    }
    return doc;
}

struct RunResult {
    std::string csv;
    std::string summary;
};

RunResult run_scenario(const Scenario& s, const CommandOptions& opts) {
    const AlgorithmSpec& a = algorithm_of(s);
    check_fits(a, s.graph);
    const mwc::WeightedNeighborGraph w = resolve_weights(s);
    const mwc::Vector x0 = resolve_initial_state(s, opts.seed);
    const mwc::Trajectory t = simulate(a, w, x0, opts.steps.value_or(a.steps));

    std::optional<mwc::SpectralReport> spectral;
    if (time_invariant(a)) {
        spectral = mwc::spectral_report(round_matrices(a, w).front(), s.n);
    }
    std::ostringstream csv;
    mwc::write_trajectory_csv(csv, t);
    return {csv.str(), mwc::format_summary_json(a.name, t, spectral)};
}

bool pairs_identical(const mwc::WeightedNeighborGraph& w) {
    const mwc::DirectedGraph& g = w.graph();
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        const mwc::Arc& a = g.arc(k);
        const mwc::Matrix& forward = w.weight(k);
        const mwc::Matrix& back = w.weight(a.head, a.tail);
        if (forward.rows() != back.rows() || forward.cols() != back.cols() ||
            std::memcmp(forward.data(), back.data(), sizeof(double) * static_cast<std::size_t>(forward.size())) !=
                0) {
            return false;
        }
    }
    return true;
}

}  // namespace

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load(opts);
        int code = kError;
        const json doc = verify_json(s, opts, code);
        const std::string text = doc.dump(2) + "\n";
        emit(output_dir(opts, s), "verify.json", text);
        out << text;
        return code;
    });
}

int cmd_synth(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load(opts);
        if (s.weights.source != WeightsSpec::Source::synthesize) {
            throw mwc::InvalidArgument("synth needs a weights.synthesize section");
        }
        mwc::EarDecomposition decomposition;
        const mwc::WeightedNeighborGraph w = resolve_weights(s, &decomposition);
        const std::string weights_text = mwc::format_weights_json(w);

        // Check what will actually be written, not the in-memory copy.
        const mwc::WeightedNeighborGraph reread = mwc::parse_weights_json(weights_text);
        if (!mwc::is_well_configured(reread, rank_tol(opts))) {
            throw mwc::Error("synthesized weights failed re-verification; nothing written");
        }
        if (s.weights.synthesis.symmetric && !pairs_identical(reread)) {
            throw mwc::Error("symmetric synthesis produced unequal pair matrices; nothing written");
        }

        const auto dir = output_dir(opts, s);
        emit(dir, "weights.json", weights_text);
        emit(dir, "decomposition.json", mwc::format_decomposition_json(decomposition));
        if (dir) {
            out << "wrote " << (*dir / "weights.json").string() << " (" << w.graph().arc_count()
                << " arcs, max ear length " << decomposition.max_ear_length() << ", verified)\n";
        } else {
            out << weights_text;
        }
        return kOk;
    });
}

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load(opts);
        const RunResult r = run_scenario(s, opts);
        const auto dir = output_dir(opts, s);
        emit(dir, "trajectory.csv", r.csv);
        emit(dir, "summary.json", r.summary);
        out << r.summary;
        return kOk;
    });
}

int cmd_analyze(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = load(opts);
        const json doc = analyze_json(s, resolve_weights(s), err);
        const std::string text = doc.dump(2) + "\n";
        emit(output_dir(opts, s), "spectral.json", text);
        out << text;
        return kOk;
    });
}

int cmd_counterexample(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Scenario s = parse_scenario(counterexample_scenario_text());
        int verify_code = kError;
        json doc = {{"scenario", s.name}};
        doc["verify"] = verify_json(s, opts, verify_code);
        doc["analyze"] = analyze_json(s, resolve_weights(s), err);
        const RunResult r = run_scenario(s, opts);
        doc["run"] = json::parse(r.summary);

        const auto dir = opts.out;
        emit(dir, "trajectory.csv", r.csv);
        emit(dir, "summary.json", r.summary);
        emit(dir, "scenario.json", std::string(counterexample_scenario_text()));
        out << doc.dump(2) << '\n';
        return kOk;
    });
}

}  // namespace mwcons
