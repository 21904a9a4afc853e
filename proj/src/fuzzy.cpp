#include "occsim/fuzzy.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace occ {

double eval_trimf(const TriangularMF& mf, double x) {
    if (x < mf.left || x > mf.right) return 0.0;
    if (x == mf.peak) return 1.0;
    if (x < mf.peak) return (x - mf.left) / (mf.peak - mf.left);
    return (mf.right - x) / (mf.right - mf.peak);
}

void LinguisticVariable::validate() const {
    if (!(lo < hi)) throw std::invalid_argument("variable '" + name + "': empty domain");
    std::set<std::string> seen;
    double last_peak = lo;
    for (const auto& t : terms) {
        if (!seen.insert(t.token).second)
            throw std::invalid_argument("variable '" + name + "': duplicate term '" + t.token + "'");
        if (!t.mf.well_formed())
            throw std::invalid_argument("term '" + t.token + "': expected left <= peak <= right");
        if (t.mf.left < lo || t.mf.right > hi)
            throw std::invalid_argument("term '" + t.token + "': support leaves the domain of '" + name + "'");
        if (t.mf.peak < last_peak)
            throw std::invalid_argument("variable '" + name + "': terms not ordered by peak");
        last_peak = t.mf.peak;
    }
}

std::optional<std::size_t> LinguisticVariable::term_index(const std::string& token) const {
    for (std::size_t i = 0; i < terms.size(); ++i)
        if (terms[i].token == token) return i;
    return std::nullopt;
}

double FuzzySet::x(std::size_t i) const {
    if (mu.size() < 2) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(mu.size() - 1);
}

double defuzzify_centroid(const FuzzySet& set) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < set.mu.size(); ++i) {
        num += set.x(i) * set.mu[i];
        den += set.mu[i];
    }
    if (den <= 0.0) throw DegenerateSetError("centroid of an all-zero fuzzy set");
    return num / den;
}

RuleSyntaxError::RuleSyntaxError(int line_, int column_, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + what),
      line(line_),
      column(column_) {}

const LinguisticVariable* RuleBase::find_variable(const std::string& n) const {
    for (const auto& v : inputs)
        if (v.name == n) return &v;
    if (output.name == n) return &output;
    return nullptr;
}

namespace {

struct Token {
    std::string text;
    int column;
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

class LineParser {
public:
    LineParser(const RuleBase& rb, std::vector<Token> toks, int line, int eol)
        : rb_(rb), toks_(std::move(toks)), line_(line), eol_(eol) {}

    FuzzyRule parse() {
        FuzzyRule r;
        expect("IF");
        r.antecedents.push_back(clause(true));
        while (peek_is("AND")) {
            ++pos_;
            r.antecedents.push_back(clause(true));
        }
        expect("THEN");
        r.consequent = clause(false);
        if (pos_ != toks_.size()) fail(toks_[pos_].column, "unexpected '" + toks_[pos_].text + "' after consequent");

        std::set<std::string> vars;
        for (std::size_t k = 0; k < r.antecedents.size(); ++k)
            if (!vars.insert(r.antecedents[k].variable).second)
                fail(1, "variable '" + r.antecedents[k].variable + "' appears twice in one rule");
        return r;
    }

private:
    [[noreturn]] void fail(int col, const std::string& msg) const { throw RuleSyntaxError(line_, col, msg); }

    int col_here() const { return pos_ < toks_.size() ? toks_[pos_].column : eol_; }

    bool peek_is(const char* kw) const { return pos_ < toks_.size() && toks_[pos_].text == kw; }

    void expect(const char* kw) {
        if (!peek_is(kw)) {
            std::string got = pos_ < toks_.size() ? "'" + toks_[pos_].text + "'" : "end of line";
            fail(col_here(), std::string("expected '") + kw + "', found " + got);
        }
        ++pos_;
    }

    const Token& word() {
        if (pos_ >= toks_.size()) fail(eol_, "unexpected end of line");
        const Token& t = toks_[pos_++];
        static const std::set<std::string> kws{"IF", "AND", "THEN", "IS"};
        if (kws.count(t.text)) fail(t.column, "expected an identifier, found keyword '" + t.text + "'");
        return t;
    }

    Clause clause(bool antecedent) {
        const Token& var = word();
        const LinguisticVariable* v = nullptr;
        if (antecedent) {
            for (const auto& in : rb_.inputs)
                if (in.name == var.text) v = &in;
            if (!v && rb_.output.name == var.text) fail(var.column, "output variable '" + var.text + "' used as antecedent");
        } else if (rb_.output.name == var.text) {
            v = &rb_.output;
        } else if (rb_.find_variable(var.text)) {
            fail(var.column, "input variable '" + var.text + "' used as consequent");
        }
        if (!v) fail(var.column, "unknown variable '" + var.text + "'");
        expect("IS");
        const Token& term = word();
        if (!v->term_index(term.text)) fail(term.column, "unknown term '" + term.text + "' for variable '" + v->name + "'");
        return {var.text, term.text};
    }

    const RuleBase& rb_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
    int eol_;
};

}  // namespace

RuleBase parse_rules(const std::string& text, RuleBase base) {
    base.rules.clear();
    std::map<std::vector<std::pair<std::string, std::string>>, int> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        FuzzyRule r = LineParser(base, std::move(toks), lineno, static_cast<int>(line.size()) + 1).parse();

        std::vector<std::pair<std::string, std::string>> key;
        for (const auto& c : r.antecedents) key.emplace_back(c.variable, c.term);
        std::sort(key.begin(), key.end());
        auto [it, fresh] = seen.emplace(key, lineno);
        if (!fresh)
            throw RuleSyntaxError(lineno, 1, "antecedent set duplicates the rule on line " + std::to_string(it->second));
        base.rules.push_back(std::move(r));
    }
    return base;
}

std::string print_rules(const RuleBase& rb) {
    std::string out;
    for (const auto& r : rb.rules) {
        out += "IF";
        for (std::size_t i = 0; i < r.antecedents.size(); ++i) {
            if (i) out += " AND";
            out += " " + r.antecedents[i].variable + " IS " + r.antecedents[i].term;
        }
        out += " THEN " + r.consequent.variable + " IS " + r.consequent.term + "\n";
    }
    return out;
}

FuzzySystem::FuzzySystem(RuleBase rb) : rb_(std::move(rb)) {
    for (const auto& v : rb_.inputs) v.validate();
    rb_.output.validate();
    if (rb_.resolution < 2) throw std::invalid_argument("resolution must be at least 2");
    if (rb_.output.terms.empty()) throw std::invalid_argument("output variable has no terms");

    for (const auto& r : rb_.rules) {
        CompiledRule c;
        for (const auto& a : r.antecedents) {
            std::size_t vi = rb_.inputs.size();
            for (std::size_t k = 0; k < rb_.inputs.size(); ++k)
                if (rb_.inputs[k].name == a.variable) vi = k;
            if (vi == rb_.inputs.size()) throw std::invalid_argument("rule references unknown input '" + a.variable + "'");
            auto ti = rb_.inputs[vi].term_index(a.term);
            if (!ti) throw std::invalid_argument("rule references unknown term '" + a.term + "'");
            c.ante.emplace_back(vi, *ti);
        }
        if (r.consequent.variable != rb_.output.name) throw std::invalid_argument("consequent must name the output variable");
        auto ot = rb_.output.term_index(r.consequent.term);
        if (!ot) throw std::invalid_argument("rule references unknown output term '" + r.consequent.term + "'");
        c.out_term = *ot;
        compiled_.push_back(std::move(c));
    }

    FuzzySet grid{rb_.output.lo, rb_.output.hi, std::vector<double>(rb_.resolution)};
    for (const auto& t : rb_.output.terms) {
        std::vector<double> s(rb_.resolution);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = eval_trimf(t.mf, grid.x(i));
        out_samples_.push_back(std::move(s));
    }
}

FuzzySet FuzzySystem::aggregate(const std::vector<double>& values) const {
    if (values.size() != rb_.inputs.size()) throw std::invalid_argument("wrong number of crisp inputs");

    std::vector<std::vector<double>> degree(rb_.inputs.size());
    for (std::size_t k = 0; k < rb_.inputs.size(); ++k) {
        const auto& v = rb_.inputs[k];
        double x = values[k];
        if (!(x >= v.lo && x <= v.hi))
            throw std::domain_error("input '" + v.name + "' = " + std::to_string(x) + " outside its domain");
        for (const auto& t : v.terms) degree[k].push_back(eval_trimf(t.mf, x));
    }

    // Per output term: firing strengths of the rules concluding it.
    std::vector<std::vector<double>> strengths(rb_.output.terms.size());
    for (const auto& c : compiled_) {
        double w = 1.0;
        for (auto [vi, ti] : c.ante) {
            double d = degree[vi][ti];
            w = rb_.ops.conjunction == AndOp::Min ? std::min(w, d) : w * d;
        }
        if (w > 0.0) strengths[c.out_term].push_back(w);
    }

    FuzzySet set{rb_.output.lo, rb_.output.hi, std::vector<double>(rb_.resolution, 0.0)};
    auto implied = [&](double w, double m) {
        return rb_.ops.implication == ImplicationOp::Min ? std::min(w, m) : w * m;
    };
    for (std::size_t t = 0; t < strengths.size(); ++t) {
        if (strengths[t].empty()) continue;
        const auto& mf = out_samples_[t];
        if (rb_.ops.aggregation == AggregationOp::Max) {
            // Both implications are monotone in w, so the strongest rule dominates.
            double w = *std::max_element(strengths[t].begin(), strengths[t].end());
            for (std::size_t i = 0; i < mf.size(); ++i) set.mu[i] = std::max(set.mu[i], implied(w, mf[i]));
        } else {
            for (double w : strengths[t])
                for (std::size_t i = 0; i < mf.size(); ++i) set.mu[i] += implied(w, mf[i]);
        }
    }

    if (rb_.ops.aggregation == AggregationOp::Sum) {
        // Rescale into [0,1]; the centroid does not depend on the scale.
        double peak = *std::max_element(set.mu.begin(), set.mu.end());
        if (peak > 1.0)
            for (auto& m : set.mu) m /= peak;
    }
    return set;
}

EvalResult FuzzySystem::evaluate_ordered(const std::vector<double>& values) const {
    FuzzySet set = aggregate(values);
    for (double m : set.mu)
        if (m > 0.0) return {defuzzify_centroid(set), false};
    return {0.5 * (rb_.output.lo + rb_.output.hi), true};
}

EvalResult FuzzySystem::evaluate(const CrispInputs& inputs) const {
    std::vector<double> ordered(rb_.inputs.size());
    std::vector<bool> given(rb_.inputs.size(), false);
    for (const auto& [name, value] : inputs) {
        std::size_t k = 0;
        while (k < rb_.inputs.size() && rb_.inputs[k].name != name) ++k;
        if (k == rb_.inputs.size()) throw std::invalid_argument("unknown input variable '" + name + "'");
        ordered[k] = value;
        given[k] = true;
    }
    for (std::size_t k = 0; k < given.size(); ++k)
        if (!given[k]) throw std::invalid_argument("missing input variable '" + rb_.inputs[k].name + "'");
    return evaluate_ordered(ordered);
}

}  // namespace occ
