#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace occ {

struct TriangularMF {
    double left = 0.0;
    double peak = 0.0;
    double right = 0.0;

    bool well_formed() const { return left <= peak && peak <= right; }
    bool operator==(const TriangularMF&) const = default;
};

// Total: 0 outside [left, right], 1 at the peak, linear on each side.
double eval_trimf(const TriangularMF& mf, double x);

struct Term {
    std::string token;
    TriangularMF mf;
    bool operator==(const Term&) const = default;
};

struct LinguisticVariable {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<Term> terms;

    // Throws std::invalid_argument when a term is malformed, duplicated,
    // outside the domain or out of peak order.
    void validate() const;
    std::optional<std::size_t> term_index(const std::string& token) const;
    bool operator==(const LinguisticVariable&) const = default;
};

struct Clause {
    std::string variable;
    std::string term;
    bool operator==(const Clause&) const = default;
};

struct FuzzyRule {
    std::vector<Clause> antecedents;
    Clause consequent;
    bool operator==(const FuzzyRule&) const = default;
};

enum class AndOp { Min, Product };
enum class ImplicationOp { Min, Product };
enum class AggregationOp { Max, Sum };

struct InferenceOps {
    AndOp conjunction = AndOp::Min;
    ImplicationOp implication = ImplicationOp::Min;
    AggregationOp aggregation = AggregationOp::Max;
    bool operator==(const InferenceOps&) const = default;
};

// Sampled membership over an output domain. x_i = lo + i*(hi-lo)/(n-1).
struct FuzzySet {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> mu;

    std::size_t resolution() const { return mu.size(); }
    double x(std::size_t i) const;
};

struct DegenerateSetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sum(x*mu)/Sum(mu). Throws DegenerateSetError for an all-zero set.
double defuzzify_centroid(const FuzzySet& set);

struct RuleSyntaxError : std::runtime_error {
    RuleSyntaxError(int line, int column, const std::string& what);
    int line;
    int column;
};

struct RuleBase {
    std::string name;
    std::vector<LinguisticVariable> inputs;
    LinguisticVariable output;
    std::vector<FuzzyRule> rules;
    InferenceOps ops;
    std::size_t resolution = 1001;

    const LinguisticVariable* find_variable(const std::string& name) const;
};

// Parses rule lines against the variables already present in `base`
// (inputs and output) and returns a copy holding the parsed rules.
// Errors carry 1-based line and column.
RuleBase parse_rules(const std::string& text, RuleBase base);

// Prints rules in the same grammar parse_rules accepts, one per line.
std::string print_rules(const RuleBase& rb);

struct EvalResult {
    double value = 0.0;
    bool degenerate = false;
};

using CrispInputs = std::vector<std::pair<std::string, double>>;

// Precomputed, immutable inference engine for one rule base.
class FuzzySystem {
public:
    explicit FuzzySystem(RuleBase rb);

    const RuleBase& rulebase() const { return rb_; }

    EvalResult evaluate(const CrispInputs& inputs) const;
    // Inputs in the order of rulebase().inputs, no name lookup.
    EvalResult evaluate_ordered(const std::vector<double>& values) const;
    // Aggregated output set before defuzzification.
    FuzzySet aggregate(const std::vector<double>& values) const;

private:
    struct CompiledRule {
        std::vector<std::pair<std::size_t, std::size_t>> ante;  // (input, term)
        std::size_t out_term;
    };
    RuleBase rb_;
    std::vector<CompiledRule> compiled_;
    std::vector<std::vector<double>> out_samples_;  // per output term
};

inline EvalResult evaluate(const FuzzySystem& sys, const CrispInputs& inputs) {
    return sys.evaluate(inputs);
}

}  // namespace occ
