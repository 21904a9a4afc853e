#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "occsim/experiments.hpp"
#include "occsim/model.hpp"
#include "occsim/plot.hpp"
#include "occsim/sim.hpp"
#include "occsim/vomas.hpp"

namespace occ {

namespace {

struct Options {
    std::string config, out, model, trace, table, system = "likelihood", title;
    std::vector<std::string> inputs;
    std::vector<double> speeds;
    double threshold = -1.0;
    int ticks = -1;
    unsigned threads = 0;
};

std::shared_ptr<const Model> pick_model(const std::string& path) {
    return path.empty() ? default_model() : load_model(path);
}

int do_fuzzy_eval(const Options& o, std::ostream& out) {
    auto model = pick_model(o.model);
    const FuzzySystem* sys = nullptr;
    if (o.system == "likelihood") sys = &model->fear.likelihood_system();
    else if (o.system == "ff") sys = &model->fear.ff_system();
    else throw CLI::ValidationError("--system", "expected likelihood or ff");

    CrispInputs in;
    for (const auto& kv : o.inputs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--input", "expected name=value, got '" + kv + "'");
        double v;
        try {
            std::size_t used = 0;
            v = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw CLI::ValidationError("--input", "malformed value in '" + kv + "'");
        }
        in.emplace_back(kv.substr(0, eq), v);
    }
    EvalResult r;
    try {
        r = sys->evaluate(in);
    } catch (const std::exception& e) {
        throw ConfigError("--input", e.what());
    }
    out << sys->rulebase().output.name << "=" << format_fixed(r.value) << (r.degenerate ? " degenerate" : "") << "\n";
    if (o.system == "ff") {
        auto [level, display] = model->fear.classify(fear_intensity(r.value, model->fear.threshold()));
        out << "level=" << to_string(level) << " display=" << display << "\n";
    }
    return kExitOk;
}

int do_simulate(const Options& o, std::ostream& out) {
    auto doc = load_scenario(o.config);
    if (o.ticks >= 0) doc.scenario.ticks = o.ticks;
    Trace t = run_scenario(doc.world, doc.scenario, *doc.model);
    write_file_atomic(o.out, trace_to_csv(t));
    out << "ticks=" << t.records.size() << " collided=" << (t.collided ? "yes" : "no") << " -> " << o.out << "\n";
    return kExitOk;
}

int do_sweep(const Options& o, std::ostream& out) {
    SweepSpec spec = load_sweep(o.config);
    if (o.ticks >= 0) spec.ticks = o.ticks;
    SweepDataset ds = run_sweep(spec, o.threads);
    write_dataset(ds, o.out);
    std::size_t collided = 0, violated = 0;
    for (const auto& r : ds.runs) {
        collided += r.trace.collided;
        violated += any_violated(r.reports);
    }
    out << "runs=" << ds.runs.size() << " collided=" << collided << " violating=" << violated << " -> " << o.out << "\n";
    return violated ? kExitViolated : kExitOk;
}

int do_validate(const Options& o, std::ostream& out) {
    if (o.trace.empty() == o.table.empty()) throw CLI::ValidationError("validate", "give exactly one of --trace or --table");
    std::vector<InvariantReport> reports;
    if (!o.trace.empty()) {
        Trace t = trace_from_csv(read_text_file(o.trace), o.trace);
        double gap = o.threshold >= 0 ? o.threshold : pick_model(o.model)->very_small_gap;
        reports = check_trace_invariants(t, {inv1a(gap), inv1b()});
    } else {
        reports = check_comparison_invariants(comparison_from_csv(read_text_file(o.table), o.table));
    }
    out << reports_summary(reports);
    if (!o.out.empty()) write_file_atomic(o.out, reports_to_csv(reports));
    return any_violated(reports) ? kExitViolated : kExitOk;
}

int do_compare(const Options& o, std::ostream& out, bool ssd) {
    auto model = pick_model(o.model);
    std::vector<double> speeds = o.speeds;
    if (speeds.empty()) speeds = ssd ? even_speeds(15, 50, 12) : even_speeds(20, 50, 7);
    ReactionProfile a = agent_profile(model->sight.agent_reaction), h = human_profile(model->sight.human_reaction);
    ComparisonTable table;
    try {
        table = ssd ? compare_ssd(speeds, a, h, model->sight.ssd_decel) : compare_osd(speeds, a, h, model->sight);
    } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("--speeds", e.what());
    }
    write_file_atomic(o.out, comparison_to_csv(table));
    auto reports = check_comparison_invariants(table);
    out << comparison_to_csv(table) << reports_summary(reports);
    return any_violated(reports) ? kExitViolated : kExitOk;
}

int do_plot(const Options& o, std::ostream& out) {
    if (o.trace.empty() == o.table.empty()) throw CLI::ValidationError("plot", "give exactly one of --trace or --table");
    std::string svg;
    try {
        if (!o.trace.empty()) {
            Trace t = trace_from_csv(read_text_file(o.trace), o.trace);
            svg = o.title.empty() ? trace_svg(t) : trace_svg(t, o.title);
        } else {
            ComparisonTable t = comparison_from_csv(read_text_file(o.table), o.table);
            svg = o.title.empty() ? comparison_svg(t) : comparison_svg(t, o.title);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(o.trace.empty() ? o.table : o.trace, e.what());
    }
    write_file_atomic(o.out, svg);
    out << "wrote " << o.out << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fear-driven two-vehicle collision avoidance simulator with invariant checks", "occsim"};
    app.require_subcommand(1, 1);
    Options o;

    auto* fe = app.add_subcommand("fuzzy-eval", "Evaluate the likelihood or ff fuzzy system");
    fe->add_option("--system", o.system, "likelihood or ff")->capture_default_str();
    fe->add_option("--input", o.inputs, "name=value, repeat per input variable")->required();
    fe->add_option("--model", o.model, "Model document (default: shipped model)");

    auto* sim = app.add_subcommand("simulate", "Run one scenario and write its trace CSV");
    sim->add_option("--config", o.config, "Scenario document")->required();
    sim->add_option("--out", o.out, "Trace CSV path")->required();
    sim->add_option("--ticks", o.ticks, "Override the tick count");

    auto* sw = app.add_subcommand("sweep", "Run a sweep and write per-run traces plus aggregates");
    sw->add_option("--config", o.config, "Sweep document")->required();
    sw->add_option("--out", o.out, "Output directory")->required();
    sw->add_option("--ticks", o.ticks, "Override ticks per run");
    sw->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

    auto* va = app.add_subcommand("validate", "Check invariants on a trace or comparison table");
    va->add_option("--trace", o.trace, "Trace CSV");
    va->add_option("--table", o.table, "Comparison CSV from compare-ssd or compare-osd");
    va->add_option("--threshold", o.threshold, "Very small gap for Inv1A, sim units");
    va->add_option("--model", o.model, "Model document supplying the default threshold");
    va->add_option("--out", o.out, "Write the report as CSV");

    auto* cs = app.add_subcommand("compare-ssd", "Agent vs human stopping sight distance");
    auto* co = app.add_subcommand("compare-osd", "Agent vs human overtaking sight distance");
    for (auto* c : {cs, co}) {
        c->add_option("--out", o.out, "Comparison CSV path")->required();
        c->add_option("--speeds", o.speeds, "Speeds in mph, strictly increasing");
        c->add_option("--model", o.model, "Model document (default: shipped model)");
    }

    auto* pl = app.add_subcommand("plot", "Render a trace or comparison table as SVG");
    pl->add_option("--trace", o.trace, "Trace CSV");
    pl->add_option("--table", o.table, "Comparison CSV");
    pl->add_option("--out", o.out, "SVG path")->required();
    pl->add_option("--title", o.title, "Chart title");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (*fe) return do_fuzzy_eval(o, out);
        if (*sim) return do_simulate(o, out);
        if (*sw) return do_sweep(o, out);
        if (*va) return do_validate(o, out);
        if (*cs) return do_compare(o, out, true);
        if (*co) return do_compare(o, out, false);
        if (*pl) return do_plot(o, out);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitUsage;
}

}  // namespace occ
