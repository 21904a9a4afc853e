#include "occsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "scenario_json.hpp"

namespace occ {

using nlohmann::json;

void SweepSpec::validate() const {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    if (ticks < 0) throw std::invalid_argument("ticks must be non-negative");
    if (phase_jitter < 0) throw std::invalid_argument("phase_jitter must be non-negative");
    if (!model && !rows.empty()) throw std::invalid_argument("sweep has no model");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            rows[i].world.validate();
            rows[i].scenario.validate(rows[i].world);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("row " + std::to_string(i) + ": " + e.what());
        }
    }
}

SweepDataset run_sweep(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    SweepDataset ds;
    const std::size_t reps = static_cast<std::size_t>(spec.repetitions);
    const std::size_t total = spec.rows.size() * reps;
    ds.runs.resize(total);
    if (total == 0) return ds;

    std::vector<InvariantSpec> monitors{inv1a(spec.model->very_small_gap), inv1b()};
    auto run_one = [&](std::size_t idx) {
        RunResult& r = ds.runs[idx];
        r.row = static_cast<int>(idx / reps);
        r.repetition = static_cast<int>(idx % reps);
        r.seed = spec.base_seed + idx;
        const SweepRow& row = spec.rows[static_cast<std::size_t>(r.row)];
        ScenarioConfig cfg = row.scenario;
        cfg.ticks = spec.ticks;
        if (spec.phase_jitter > 0) {
            std::mt19937_64 rng(r.seed);
            cfg.target_phase += static_cast<int>(rng() % static_cast<std::uint64_t>(spec.phase_jitter + 1));
        }
        r.phase = cfg.target_phase;
        WorldConfig world = row.world;
        world.seed = r.seed;
        TraceMonitor mon(monitors);
        r.trace = run_scenario(world, cfg, *spec.model, mon.observer());
        r.reports = mon.reports();
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < total; i = next++) run_one(i);
        });
    for (auto& th : pool) th.join();
    return ds;
}

std::map<std::string, std::string> serialize_dataset(const SweepDataset& ds) {
    std::map<std::string, std::string> files;
    std::string agg = "row,repetition,seed,phase,ticks,collided,min_gap,mean_fear,final_bullet_speed\n";
    std::string inv = "row,repetition,invariant,verdict,evidence\n";
    // Mean fear display per (row, tick) over the repetitions that reached it.
    std::map<std::pair<int, int>, std::pair<double, int>> mean;

    for (const auto& r : ds.runs) {
        char name[64];
        std::snprintf(name, sizeof name, "runs/row%02d_rep%03d.csv", r.row, r.repetition);
        files[name] = trace_to_csv(r.trace);

        double min_gap = 0.0, sum = 0.0, final_speed = 0.0;
        if (!r.trace.records.empty()) {
            min_gap = r.trace.records.front().distance;
            for (const auto& t : r.trace.records) {
                min_gap = std::min(min_gap, t.distance);
                sum += t.fear_display;
                auto& m = mean[{r.row, t.tick}];
                m.first += t.fear_display;
                m.second += 1;
            }
            final_speed = r.trace.records.back().bullet_speed;
        }
        double mf = r.trace.records.empty() ? 0.0 : sum / static_cast<double>(r.trace.records.size());
        agg += std::to_string(r.row) + "," + std::to_string(r.repetition) + "," + std::to_string(r.seed) + "," +
               std::to_string(r.phase) + "," + std::to_string(r.trace.records.size()) + "," +
               (r.trace.collided ? "1" : "0") + "," + format_fixed(min_gap) + "," + format_fixed(mf) + "," +
               format_fixed(final_speed) + "\n";
        for (const auto& rep : r.reports)
            inv += std::to_string(r.row) + "," + std::to_string(r.repetition) + "," + rep.id + "," + to_string(rep.verdict) +
                   "," + std::to_string(rep.evidence.size()) + "\n";
    }
    std::string mf = "row,tick,mean_fear,runs\n";
    for (const auto& [key, v] : mean)
        mf += std::to_string(key.first) + "," + std::to_string(key.second) + "," + format_fixed(v.first / v.second) + "," +
              std::to_string(v.second) + "\n";
    files["aggregate.csv"] = agg;
    files["invariants.csv"] = inv;
    files["mean_fear.csv"] = mf;
    return files;
}

void write_dataset(const SweepDataset& ds, const std::filesystem::path& dir) {
    auto files = serialize_dataset(ds);
    std::filesystem::create_directories(dir / "runs");
    for (const auto& [name, content] : files) write_file_atomic(dir / name, content);
}

SweepSpec parse_sweep(const std::string& text, const std::filesystem::path& base_dir, const std::string& where) {
    json doc = detail::parse_json(text, where);
    if (!doc.is_object()) throw ConfigError(where, "expected an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        static const char* allowed[] = {"base", "repetitions", "ticks", "base_seed", "phase_jitter", "rows"};
        if (std::find_if(std::begin(allowed), std::end(allowed), [&](const char* a) { return it.key() == a; }) ==
            std::end(allowed))
            throw ConfigError(where + " [" + it.key() + "]", "unknown key");
    }

    json base = json::object();
    std::filesystem::path scenario_dir = base_dir;
    if (doc.contains("base")) {
        if (!doc.at("base").is_string()) throw ConfigError(where + " [base]", "expected a file path");
        std::string b = doc.at("base").get<std::string>();
        if (base_dir.empty() && std::filesystem::path(b).filename() == "exp1.json") {
            base = detail::parse_json(embedded::exp1_json(), "exp1.json");
        } else {
            auto p = base_dir / b;
            base = detail::parse_json(read_text_file(p), p.string());
            scenario_dir = p.parent_path();
        }
    }

    SweepSpec spec;
    auto integer = [&](const char* k, auto& dst) {
        if (!doc.contains(k)) return;
        if (!doc.at(k).is_number_integer()) throw ConfigError(where + " [" + k + "]", "expected an integer");
        dst = doc.at(k).get<std::remove_reference_t<decltype(dst)>>();
    };
    integer("repetitions", spec.repetitions);
    integer("ticks", spec.ticks);
    integer("base_seed", spec.base_seed);
    integer("phase_jitter", spec.phase_jitter);

    if (doc.contains("rows")) {
        const json& rows = doc.at("rows");
        if (!rows.is_array()) throw ConfigError(where + " [rows]", "expected an array");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            json merged = base;
            merged.merge_patch(rows[i]);
            auto sd = detail::scenario_from_json(merged, scenario_dir, where + " row " + std::to_string(i));
            if (!spec.model) spec.model = sd.model;
            spec.rows.push_back({sd.world, sd.scenario});
        }
    }
    if (!spec.model) spec.model = default_model();
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where, e.what());
    }
    return spec;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
    auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    return parse_sweep(read_text_file(path), dir, path.string());
}

bool braking_trial(double mph, double reaction_time, double decel, double gap_feet, double dt) {
    double v = mph_to_fps(mph);
    double x = 0.0;
    for (double t = 0.0; t < reaction_time;) {
        double h = std::min(dt, reaction_time - t);
        x += v * h;
        t += h;
        if (x >= gap_feet) return false;
    }
    while (v > 0.0) {
        if (v <= decel * dt) {
            x += v * v / (2.0 * decel);
            v = 0.0;
        } else {
            x += v * dt - 0.5 * decel * dt * dt;
            v -= decel * dt;
        }
        if (x >= gap_feet) return false;
    }
    return true;
}

double min_stopping_gap(double mph, double reaction_time, double decel, double dt) {
    if (mph <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 10.0;
    while (!braking_trial(mph, reaction_time, decel, hi, dt)) hi *= 2.0;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        (braking_trial(mph, reaction_time, decel, mid, dt) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<double> even_speeds(double lo, double hi, int count) {
    std::vector<double> out;
    if (count == 1) return {lo};
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

namespace {
void require_increasing(const std::vector<double>& speeds) {
    if (speeds.empty()) throw std::invalid_argument("no speeds given");
    for (std::size_t i = 1; i < speeds.size(); ++i)
        if (!(speeds[i] > speeds[i - 1])) throw std::invalid_argument("speeds must be strictly increasing");
}
}  // namespace

ComparisonTable compare_ssd(const std::vector<double>& speeds, const ReactionProfile& agent, const ReactionProfile& human,
                            double decel) {
    require_increasing(speeds);
    ComparisonTable t;
    for (double v : speeds) {
        ComparisonRow r;
        r.speed_mph = v;
        r.kind = ScenarioKind::RearEnd;
        r.agent = min_stopping_gap(v, agent.reaction_time, decel);
        r.human = min_stopping_gap(v, human.reaction_time, decel);
        r.success = braking_trial(v, agent.reaction_time, decel, r.agent) &&
                    braking_trial(v, human.reaction_time, decel, r.human);
        r.agent_formula = stopping_sight_distance({v, agent.reaction_time, decel});
        r.human_formula = stopping_sight_distance({v, human.reaction_time, decel});
        t.push_back(r);
    }
    return t;
}

ComparisonTable compare_osd(const std::vector<double>& speeds, const ReactionProfile& agent, const ReactionProfile& human,
                            const SightCalibration& cal) {
    require_increasing(speeds);
    ComparisonTable t;
    for (double v : speeds) {
        ComparisonRow r;
        r.speed_mph = v;
        r.kind = ScenarioKind::Overtaking;
        double a = cal.osd_accel_at(v);
        r.agent = overtaking_sight_distance({mph_to_fps(v), agent.reaction_time, cal.osd_spacing, a});
        r.human = overtaking_sight_distance({mph_to_fps(v), human.reaction_time, cal.osd_spacing, a});
        r.agent_formula = r.agent;
        r.human_formula = r.human;
        r.success = std::isfinite(r.agent) && std::isfinite(r.human);
        t.push_back(r);
    }
    return t;
}

std::string comparison_to_csv(const ComparisonTable& table) {
    std::string out = "speed_mph,agent_ft,human_ft,kind,success,agent_formula_ft,human_formula_ft\n";
    for (const auto& r : table)
        out += format_fixed(r.speed_mph, 4) + "," + format_fixed(r.agent, 4) + "," + format_fixed(r.human, 4) + "," +
               (r.kind == ScenarioKind::RearEnd ? "rear_end" : "overtaking") + "," + (r.success ? "1" : "0") + "," +
               format_fixed(r.agent_formula, 4) + "," + format_fixed(r.human_formula, 4) + "\n";
    return out;
}

ComparisonTable comparison_from_csv(const std::string& text, const std::string& where) {
    ComparisonTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        auto loc = where + ":" + std::to_string(lineno);
        if (f.size() != 7) throw ConfigError(loc, "expected 7 fields");
        ComparisonRow r;
        try {
            r.speed_mph = std::stod(f[0]);
            r.agent = std::stod(f[1]);
            r.human = std::stod(f[2]);
            r.agent_formula = std::stod(f[5]);
            r.human_formula = std::stod(f[6]);
        } catch (const std::exception&) {
            throw ConfigError(loc, "malformed number");
        }
        if (f[3] == "rear_end") r.kind = ScenarioKind::RearEnd;
        else if (f[3] == "overtaking") r.kind = ScenarioKind::Overtaking;
        else throw ConfigError(loc, "kind must be rear_end or overtaking");
        if (f[4] != "0" && f[4] != "1") throw ConfigError(loc, "success must be 0 or 1");
        r.success = f[4] == "1";
        t.push_back(r);
    }
    return t;
}

}  // namespace occ
