#include "occsim/model.hpp"

#include <fstream>
#include <json.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

namespace occ {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

struct Ctx {
    std::string where;
    std::string key(const std::string& k) const { return where + " [" + k + "]"; }
};

const json& need(const json& j, const char* k, const Ctx& c, const std::string& path) {
    if (!j.is_object() || !j.contains(k)) throw ConfigError(c.key(path + k), "missing key");
    return j.at(k);
}

double num(const json& j, const Ctx& c, const std::string& path) {
    if (!j.is_number()) throw ConfigError(c.key(path), "expected a number");
    return j.get<double>();
}

LinguisticVariable parse_variable(const json& j, const Ctx& c, const std::string& path) {
    LinguisticVariable v;
    const json& name = need(j, "name", c, path);
    if (!name.is_string()) throw ConfigError(c.key(path + "name"), "expected a string");
    v.name = name.get<std::string>();
    const json& dom = need(j, "domain", c, path);
    if (!dom.is_array() || dom.size() != 2) throw ConfigError(c.key(path + "domain"), "expected [lo, hi]");
    v.lo = num(dom[0], c, path + "domain/0");
    v.hi = num(dom[1], c, path + "domain/1");
    const json& terms = need(j, "terms", c, path);
    if (!terms.is_array()) throw ConfigError(c.key(path + "terms"), "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::string tp = path + "terms/" + std::to_string(i);
        const json& t = terms[i];
        if (!t.is_array() || t.size() != 4 || !t[0].is_string())
            throw ConfigError(c.key(tp), "expected [token, left, peak, right]");
        v.terms.push_back({t[0].get<std::string>(), {num(t[1], c, tp), num(t[2], c, tp), num(t[3], c, tp)}});
    }
    try {
        v.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(c.key(path), e.what());
    }
    return v;
}

InferenceOps parse_ops(const json& j, const Ctx& c, const std::string& path) {
    InferenceOps ops;
    if (!j.is_object()) throw ConfigError(c.key(path), "expected an object");
    auto pick = [&](const char* k, const char* a, const char* b) -> int {
        if (!j.contains(k)) return 0;
        std::string s = j.at(k).is_string() ? j.at(k).get<std::string>() : "";
        if (s == a) return 0;
        if (s == b) return 1;
        throw ConfigError(c.key(path + k), std::string("expected '") + a + "' or '" + b + "'");
    };
    ops.conjunction = pick("and", "min", "product") ? AndOp::Product : AndOp::Min;
    ops.implication = pick("implication", "min", "product") ? ImplicationOp::Product : ImplicationOp::Min;
    ops.aggregation = pick("aggregation", "max", "sum") ? AggregationOp::Sum : AggregationOp::Max;
    return ops;
}

std::string rules_text(const std::string& file, const std::filesystem::path& base_dir) {
    if (base_dir.empty()) {
        if (file == "likelihood.rules") return embedded::likelihood_rules();
        if (file == "ff.rules") return embedded::ff_rules();
    }
    return read_text_file(base_dir / file);
}

FuzzySystem parse_system(const json& j, const Ctx& c, const std::string& path, const std::filesystem::path& base_dir) {
    RuleBase rb;
    rb.name = path.substr(0, path.size() - 1);
    const json& inputs = need(j, "inputs", c, path);
    if (!inputs.is_array()) throw ConfigError(c.key(path + "inputs"), "expected an array");
    for (std::size_t i = 0; i < inputs.size(); ++i)
        rb.inputs.push_back(parse_variable(inputs[i], c, path + "inputs/" + std::to_string(i) + "/"));
    rb.output = parse_variable(need(j, "output", c, path), c, path + "output/");
    if (j.contains("operators")) rb.ops = parse_ops(j.at("operators"), c, path + "operators/");
    if (j.contains("resolution")) {
        double r = num(j.at("resolution"), c, path + "resolution");
        if (r < 2 || r != std::floor(r)) throw ConfigError(c.key(path + "resolution"), "expected an integer >= 2");
        rb.resolution = static_cast<std::size_t>(r);
    }
    const json& rf = need(j, "rules", c, path);
    if (!rf.is_string()) throw ConfigError(c.key(path + "rules"), "expected a file name");
    std::string file = rf.get<std::string>();
    std::string text = rules_text(file, base_dir);
    try {
        rb = parse_rules(text, rb);
    } catch (const RuleSyntaxError& e) {
        throw ConfigError(file + ":" + std::to_string(e.line) + ":" + std::to_string(e.column), e.what());
    }
    try {
        return FuzzySystem(std::move(rb));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(c.key(path), e.what());
    }
}

std::vector<FearCell> parse_cells(const json& j, const Ctx& c) {
    if (!j.is_array() || j.empty()) throw ConfigError(c.key("fear/cells"), "expected a non-empty array");
    std::vector<FearCell> cells;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string p = "fear/cells/" + std::to_string(i) + "/";
        const json& e = j[i];
        FearCell cell{};
        const json& below = need(e, "below", c, p);
        cell.below = below.is_null() ? std::numeric_limits<double>::infinity() : num(below, c, p + "below");
        double d = num(need(e, "display", c, p), c, p + "display");
        if (d < 0 || d > 100 || d != std::floor(d)) throw ConfigError(c.key(p + "display"), "expected an integer in [0,100]");
        cell.display = static_cast<int>(d);
        try {
            cell.level = parse_fear_level(need(e, "level", c, p).get<std::string>());
        } catch (const std::exception& ex) {
            throw ConfigError(c.key(p + "level"), ex.what());
        }
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace

std::shared_ptr<const Model> parse_model(const std::string& text, const std::filesystem::path& base_dir,
                                         const std::string& where) {
    Ctx c{where};
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(where + " (byte " + std::to_string(e.byte) + ")", "JSON syntax error");
    }
    FuzzySystem lik = parse_system(need(j, "likelihood", c, ""), c, "likelihood/", base_dir);
    FuzzySystem ff = parse_system(need(j, "ff", c, ""), c, "ff/", base_dir);

    const json& fear = need(j, "fear", c, "");
    double threshold = fear.contains("threshold") ? num(fear.at("threshold"), c, "fear/threshold") : 0.0;
    auto cells = parse_cells(need(fear, "cells", c, "fear/"), c);

    SightCalibration sight;
    if (j.contains("sight")) {
        const json& s = j.at("sight");
        auto opt = [&](const char* k, double& dst) {
            if (s.contains(k)) dst = num(s.at(k), c, std::string("sight/") + k);
        };
        opt("agent_reaction", sight.agent_reaction);
        opt("human_reaction", sight.human_reaction);
        opt("ssd_decel", sight.ssd_decel);
        opt("osd_spacing", sight.osd_spacing);
        if (s.contains("osd_accel")) {
            sight.osd_accel.clear();
            for (const auto& p : s.at("osd_accel")) {
                if (!p.is_array() || p.size() != 2) throw ConfigError(c.key("sight/osd_accel"), "expected [mph, accel] pairs");
                sight.osd_accel.emplace_back(num(p[0], c, "sight/osd_accel"), num(p[1], c, "sight/osd_accel"));
            }
            for (std::size_t i = 1; i < sight.osd_accel.size(); ++i)
                if (!(sight.osd_accel[i].first > sight.osd_accel[i - 1].first))
                    throw ConfigError(c.key("sight/osd_accel"), "speeds must increase");
        }
        if (sight.agent_reaction <= 0 || sight.human_reaction <= 0)
            throw ConfigError(c.key("sight"), "reaction times must be positive");
        if (sight.ssd_decel <= 0) throw ConfigError(c.key("sight/ssd_decel"), "must be positive");
    }

    double gap = 3.0;
    if (j.contains("vomas") && j.at("vomas").contains("very_small_gap"))
        gap = num(j.at("vomas").at("very_small_gap"), c, "vomas/very_small_gap");

    try {
        return std::make_shared<const Model>(Model{FearModel(std::move(lik), std::move(ff), threshold, std::move(cells)), sight, gap});
    } catch (const std::invalid_argument& e) {
        throw ConfigError(c.key("fear"), e.what());
    }
}

std::shared_ptr<const Model> load_model(const std::filesystem::path& path) {
    return parse_model(read_text_file(path), path.parent_path().empty() ? "." : path.parent_path(), path.string());
}

std::shared_ptr<const Model> default_model() {
    static std::once_flag once;
    static std::shared_ptr<const Model> m;
    std::call_once(once, [] { m = parse_model(embedded::model_json(), {}, "model.json"); });
    return m;
}

}  // namespace occ
