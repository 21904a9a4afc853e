#include "occsim/sim.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <type_traits>

#include "scenario_json.hpp"

namespace occ {

using nlohmann::json;

void WorldConfig::validate() const {
    if (!(extent_lo < extent_hi)) throw std::invalid_argument("world extent is empty");
    if (!(patch_scale > 0)) throw std::invalid_argument("patch_scale must be positive");
    if (!(tick_seconds > 0)) throw std::invalid_argument("tick_seconds must be positive");
    if (!(min_velocity >= 0 && min_velocity <= max_velocity)) throw std::invalid_argument("need 0 <= min_velocity <= max_velocity");
    if (!(max_velocity > 0)) throw std::invalid_argument("max_velocity must be positive");
    if (!(accel_scale > 0)) throw std::invalid_argument("accel_scale must be positive");
}

void ScenarioConfig::validate(const WorldConfig& world) const {
    if (!(separation > 0)) throw std::invalid_argument("separation must be positive");
    if (ticks < 0) throw std::invalid_argument("ticks must be non-negative");
    if (target_period < 1) throw std::invalid_argument("target_period must be at least 1");
    if (target_phase < 0) throw std::invalid_argument("target_phase must be non-negative");
    for (double r : {bullet_accel, bullet_decel, target_accel, target_decel})
        if (!(r >= 0)) throw std::invalid_argument("accel/decel rates must be non-negative");
    for (double e : {undesirability, ig})
        if (!(e >= 0 && e <= 1)) throw std::invalid_argument("emotion constants must lie in [0,1]");
    if (reaction != "eeec_agent" && reaction != "human") throw std::invalid_argument("reaction must be eeec_agent or human");
    if (target_initial_speed && !(*target_initial_speed >= world.min_velocity && *target_initial_speed <= world.max_velocity))
        throw std::invalid_argument("target_initial_speed outside [min_velocity, max_velocity]");
}

double decide_maneuver(FearLevel level, const VehicleState& bullet, const WorldConfig& world, MediumAction medium) {
    double cmd;
    if (level == FearLevel::High || level == FearLevel::VeryHigh)
        cmd = -bullet.decel;
    else if (level == FearLevel::Medium && medium == MediumAction::Hold)
        cmd = 0.0;
    else
        cmd = bullet.accel;
    cmd *= world.accel_scale;
    double next = std::clamp(bullet.speed + cmd, world.min_velocity, world.max_velocity);
    return next - bullet.speed;
}

namespace {

double sight_units(const WorldConfig& world, const ScenarioConfig& cfg, const Model& model, double speed_mph) {
    double t = model.sight.reaction_for(cfg.reaction);
    double feet;
    if (cfg.kind == ScenarioKind::RearEnd) {
        feet = stopping_sight_distance({speed_mph, t, model.sight.ssd_decel});
    } else {
        feet = overtaking_sight_distance(
            {mph_to_fps(speed_mph), t, model.sight.osd_spacing, model.sight.osd_accel_at(speed_mph)});
    }
    return to_sim_units(feet, world.patch_scale);
}

}  // namespace

StepResult step(const WorldConfig& world, const ScenarioConfig& cfg, const Model& model, const VehicleState& bullet,
                const VehicleState& target, int tick) {
    StepResult r{bullet, target, {}, false};
    double gap = target.position - bullet.position;
    if (gap <= 0.0) {
        r.collided = true;
        return r;
    }

    double u = cfg.undesirability, ig = cfg.ig;
    std::optional<double> lik;
    if (!cfg.replay.empty()) {
        const SimRecord& rec = cfg.replay[std::min<std::size_t>(static_cast<std::size_t>(tick), cfg.replay.size() - 1)];
        u = rec.undesirability;
        ig = rec.ig;
        lik = rec.likelihood;
    }
    double dn = std::clamp(gap / world.span(), 0.0, 1.0);
    double sn = std::clamp(bullet.speed / world.max_velocity, 0.0, 1.0);
    FearState fear = model.fear.appraise(dn, sn, u, ig, lik);

    double dv;
    if (cfg.eeec_agent) {
        dv = decide_maneuver(fear.level, bullet, world, cfg.medium_action);
    } else {
        dv = std::clamp(bullet.speed + bullet.accel * world.accel_scale, world.min_velocity, world.max_velocity) - bullet.speed;
    }
    r.bullet.speed = bullet.speed + dv;

    bool accelerating = ((tick + cfg.target_phase) / cfg.target_period) % 2 == 0;
    double tdv = (accelerating ? target.accel : -target.decel) * world.accel_scale;
    r.target.speed = std::clamp(target.speed + tdv, world.min_velocity, world.max_velocity);

    double per_mph = world.tick_seconds * kFpsPerMph / world.patch_scale;
    r.bullet.position += r.bullet.speed * per_mph;
    r.target.position += r.target.speed * per_mph;

    r.record = {tick, sight_units(world, cfg, model, bullet.speed), gap, fear.display, fear.level, bullet.speed, target.speed};
    return r;
}

Trace run_scenario(const WorldConfig& world, const ScenarioConfig& cfg, const Model& model, const TickObserver& observer) {
    world.validate();
    cfg.validate(world);

    Trace trace{world, cfg, {}, false, -1};
    VehicleState bullet{Role::Bullet, 0.0, world.min_velocity, cfg.bullet_accel, cfg.bullet_decel};
    VehicleState target{Role::Target, cfg.separation, cfg.target_initial_speed.value_or(world.min_velocity),
                        cfg.target_accel, cfg.target_decel};
    trace.records.reserve(static_cast<std::size_t>(cfg.ticks));
    for (int k = 0; k < cfg.ticks; ++k) {
        StepResult s = step(world, cfg, model, bullet, target, k);
        if (s.collided) {
            trace.collided = true;
            trace.collision_tick = k;
            break;
        }
        if (observer) observer(s.record);
        trace.records.push_back(s.record);
        bullet = s.bullet;
        target = s.target;
    }
    if (!trace.collided && cfg.ticks > 0 && target.position - bullet.position <= 0.0) {
        trace.collided = true;
        trace.collision_tick = cfg.ticks;
    }
    return trace;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* b = s.c_str();
    char* e = nullptr;
    errno = 0;
    double v = std::strtod(b, &e);
    if (errno != 0 || e != b + s.size() || !std::isfinite(v)) return false;
    out = v;
    return true;
}

}  // namespace

std::vector<SimRecord> import_simconnector(std::istream& in) {
    std::vector<SimRecord> out;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto f = split_csv(t);
        if (first) {
            first = false;
            if (f.size() == 3 && f[0] == "undesirability" && f[1] == "likelihood" && f[2] == "ig") continue;
        }
        std::string where = "line " + std::to_string(lineno) + ": ";
        if (f.size() != 3) throw std::runtime_error(where + "expected 3 fields, found " + std::to_string(f.size()));
        SimRecord r;
        double v;
        const char* names[] = {"undesirability", "likelihood", "ig"};
        for (int i = 0; i < 3; ++i) {
            if (i == 1 && f[1].empty()) continue;
            if (!parse_double(f[i], v)) throw std::runtime_error(where + "malformed " + names[i] + " '" + f[i] + "'");
            if (v < 0.0 || v > 1.0) throw std::runtime_error(where + names[i] + " " + f[i] + " outside [0,1]");
            if (i == 0) r.undesirability = v;
            if (i == 1) r.likelihood = v;
            if (i == 2) r.ig = v;
        }
        out.push_back(r);
    }
    return out;
}

std::vector<SimRecord> import_simconnector(const std::string& text) {
    std::istringstream in(text);
    return import_simconnector(in);
}

std::string format_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s == "-0." + std::string(static_cast<std::size_t>(digits), '0')) s.erase(0, 1);
    return s;
}

const std::string& trace_csv_header() {
    static const std::string h = "tick,ssd,distance,fear_display,fear_level,bullet_speed,target_speed";
    return h;
}

std::string trace_to_csv(const Trace& trace) {
    std::string out = trace_csv_header() + "\n";
    for (const auto& r : trace.records) {
        out += std::to_string(r.tick) + "," + format_fixed(r.ssd) + "," + format_fixed(r.distance) + "," +
               std::to_string(r.fear_display) + "," + to_string(r.fear_level) + "," + format_fixed(r.bullet_speed) + "," +
               format_fixed(r.target_speed) + "\n";
    }
    return out;
}

Trace trace_from_csv(const std::string& text, const std::string& where) {
    Trace t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty()) continue;
        if (!header) {
            if (s != trace_csv_header()) throw ConfigError(where + ":" + std::to_string(lineno), "unexpected trace header");
            header = true;
            continue;
        }
        auto f = split_csv(s);
        auto bad = [&](const std::string& msg) { return ConfigError(where + ":" + std::to_string(lineno), msg); };
        if (f.size() != 7) throw bad("expected 7 fields");
        TickRecord r;
        double v[7] = {};
        for (int i : {0, 1, 2, 3, 5, 6})
            if (!parse_double(f[static_cast<std::size_t>(i)], v[i])) throw bad("malformed number '" + f[static_cast<std::size_t>(i)] + "'");
        r.tick = static_cast<int>(v[0]);
        r.ssd = v[1];
        r.distance = v[2];
        r.fear_display = static_cast<int>(v[3]);
        try {
            r.fear_level = parse_fear_level(f[4]);
        } catch (const std::exception& e) {
            throw bad(e.what());
        }
        r.bullet_speed = v[5];
        r.target_speed = v[6];
        t.records.push_back(r);
    }
    if (!header) throw ConfigError(where, "empty trace file");
    return t;
}

namespace detail {

json parse_json(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(where + " (byte " + std::to_string(e.byte) + ")", "JSON syntax error");
    }
}

namespace {

void check_keys(const json& j, const std::string& where, const std::string& section, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(where + " [" + section + "]", "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(where + " [" + section + "/" + it.key() + "]", "unknown key");
    }
}

template <class T>
void read(const json& j, const char* key, T& dst, const std::string& where, const std::string& section) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    std::string loc = where + " [" + section + "/" + key + "]";
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(loc, "expected true or false");
        dst = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(loc, "expected a string");
        dst = v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(loc, "expected an integer");
        dst = v.get<T>();
    } else {
        if (!v.is_number()) throw ConfigError(loc, "expected a number");
        dst = v.get<T>();
    }
}

}  // namespace

ScenarioDocument scenario_from_json(const json& doc, const std::filesystem::path& base_dir, const std::string& where) {
    check_keys(doc, where, "", {"model", "world", "scenario", "replay"});
    ScenarioDocument out;

    if (doc.contains("model")) {
        if (!doc.at("model").is_string()) throw ConfigError(where + " [model]", "expected a file path");
        out.model = load_model(base_dir / doc.at("model").get<std::string>());
    } else {
        out.model = default_model();
    }

    WorldConfig& w = out.world;
    if (doc.contains("world")) {
        const json& j = doc.at("world");
        check_keys(j, where, "world",
                   {"extent", "patch_scale", "tick_seconds", "min_velocity", "max_velocity", "accel_scale", "seed"});
        if (j.contains("extent")) {
            const json& e = j.at("extent");
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                throw ConfigError(where + " [world/extent]", "expected [lo, hi]");
            w.extent_lo = e[0].get<double>();
            w.extent_hi = e[1].get<double>();
        }
        read(j, "patch_scale", w.patch_scale, where, "world");
        read(j, "tick_seconds", w.tick_seconds, where, "world");
        read(j, "min_velocity", w.min_velocity, where, "world");
        read(j, "max_velocity", w.max_velocity, where, "world");
        read(j, "accel_scale", w.accel_scale, where, "world");
        read(j, "seed", w.seed, where, "world");
    }
    try {
        w.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + " [world]", e.what());
    }

    ScenarioConfig& s = out.scenario;
    if (doc.contains("scenario")) {
        const json& j = doc.at("scenario");
        check_keys(j, where, "scenario",
                   {"kind", "separation", "bullet_accel", "bullet_decel", "target_accel", "target_decel", "target_period",
                    "target_phase", "target_initial_speed", "eeec_agent", "undesirability", "ig", "reaction",
                    "medium_action", "ticks"});
        std::string kind = "rear_end", medium = "hold";
        read(j, "kind", kind, where, "scenario");
        if (kind == "rear_end") s.kind = ScenarioKind::RearEnd;
        else if (kind == "overtaking") s.kind = ScenarioKind::Overtaking;
        else throw ConfigError(where + " [scenario/kind]", "expected rear_end or overtaking");
        read(j, "separation", s.separation, where, "scenario");
        read(j, "bullet_accel", s.bullet_accel, where, "scenario");
        read(j, "bullet_decel", s.bullet_decel, where, "scenario");
        read(j, "target_accel", s.target_accel, where, "scenario");
        read(j, "target_decel", s.target_decel, where, "scenario");
        read(j, "target_period", s.target_period, where, "scenario");
        read(j, "target_phase", s.target_phase, where, "scenario");
        if (j.contains("target_initial_speed") && !j.at("target_initial_speed").is_null()) {
            double v = 0;
            read(j, "target_initial_speed", v, where, "scenario");
            s.target_initial_speed = v;
        }
        read(j, "eeec_agent", s.eeec_agent, where, "scenario");
        read(j, "undesirability", s.undesirability, where, "scenario");
        read(j, "ig", s.ig, where, "scenario");
        read(j, "reaction", s.reaction, where, "scenario");
        read(j, "medium_action", medium, where, "scenario");
        if (medium == "hold") s.medium_action = MediumAction::Hold;
        else if (medium == "accelerate") s.medium_action = MediumAction::Accelerate;
        else throw ConfigError(where + " [scenario/medium_action]", "expected hold or accelerate");
        read(j, "ticks", s.ticks, where, "scenario");
    }
    if (doc.contains("replay")) {
        if (!doc.at("replay").is_string()) throw ConfigError(where + " [replay]", "expected a file path");
        auto p = base_dir / doc.at("replay").get<std::string>();
        try {
            s.replay = import_simconnector(read_text_file(p));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::runtime_error& e) {
            throw ConfigError(p.string(), e.what());
        }
    }
    try {
        s.validate(w);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + " [scenario]", e.what());
    }
    return out;
}

}  // namespace detail

ScenarioDocument parse_scenario(const std::string& text, const std::filesystem::path& base_dir, const std::string& where) {
    return detail::scenario_from_json(detail::parse_json(text, where), base_dir, where);
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
    auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    return parse_scenario(read_text_file(path), dir, path.string());
}

}  // namespace occ
