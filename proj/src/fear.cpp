#include "occsim/fear.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace occ {

std::string to_string(FearLevel level) {
    switch (level) {
        case FearLevel::VeryLow: return "VeryLow";
        case FearLevel::Low: return "Low";
        case FearLevel::Medium: return "Medium";
        case FearLevel::High: return "High";
        case FearLevel::VeryHigh: return "VeryHigh";
    }
    return "?";
}

FearLevel parse_fear_level(const std::string& text) {
    for (int i = 0; i <= 4; ++i) {
        auto l = static_cast<FearLevel>(i);
        if (to_string(l) == text) return l;
    }
    throw std::invalid_argument("unknown fear level '" + text + "'");
}

double fear_intensity(double potential, double threshold) {
    return potential > threshold ? potential - threshold : 0.0;
}

std::pair<FearLevel, int> classify_level(double intensity, const std::vector<FearCell>& cells) {
    if (cells.empty()) throw std::invalid_argument("empty fear quantization table");
    for (const auto& c : cells)
        if (intensity < c.below) return {c.level, c.display};
    return {cells.back().level, cells.back().display};
}

std::string generate_ff_rules() {
    static const char* u[] = {"VLU", "LU", "MU", "HU", "VHU"};
    static const char* l[] = {"VLLH", "LLH", "MLH", "HLH", "VHLH"};
    static const char* g[] = {"VLIG", "LIG", "MIG", "HIG", "VHIG"};
    static const char* f[] = {"VLF", "LF", "MF", "HF", "VHF"};
    std::string out =
        "# Fear potential from undesirability, likelihood and ig.\n"
        "# consequent index = floor((u + 2*l + i) / 4 + 0.5), indices 0..4\n"
        "# Produced by occ::generate_ff_rules(); a unit test keeps this file in sync.\n";
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            for (int c = 0; c < 5; ++c) {
                // (a + 2b + c) is an integer, so the +2 trick rounds halves up exactly.
                int k = (a + 2 * b + c + 2) / 4;
                out += std::string("IF undesirability IS ") + u[a] + " AND likelihood IS " + l[b] + " AND ig IS " + g[c] +
                       " THEN fear IS " + f[k] + "\n";
            }
    return out;
}

FearModel::FearModel(FuzzySystem likelihood, FuzzySystem ff, double threshold, std::vector<FearCell> cells)
    : likelihood_(std::move(likelihood)), ff_(std::move(ff)), threshold_(threshold), cells_(std::move(cells)) {
    if (likelihood_.rulebase().inputs.size() != 2) throw std::invalid_argument("likelihood system needs two inputs");
    if (ff_.rulebase().inputs.size() != 3) throw std::invalid_argument("ff system needs three inputs");
    if (!(threshold_ >= 0.0 && threshold_ <= 1.0)) throw std::invalid_argument("fear threshold outside [0,1]");
    if (cells_.empty()) throw std::invalid_argument("empty fear quantization table");
    for (std::size_t i = 1; i < cells_.size(); ++i)
        if (!(cells_[i].below > cells_[i - 1].below)) throw std::invalid_argument("fear cells must have increasing bounds");
}

double FearModel::compute_likelihood(double distance_norm, double speed_norm) const {
    return likelihood_.evaluate_ordered({distance_norm, speed_norm}).value;
}

double FearModel::fear_potential(const EmotionInputs& in) const {
    for (double v : {in.undesirability, in.likelihood, in.ig})
        if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("emotion input outside [0,1]");
    // Fear needs an undesirable prospect in the first place.
    if (in.undesirability <= 0.0) return 0.0;
    return ff_.evaluate_ordered({in.undesirability, in.likelihood, in.ig}).value;
}

FearState FearModel::appraise(double distance_norm, double speed_norm, double undesirability, double ig,
                              std::optional<double> likelihood_override) const {
    FearState s;
    s.likelihood = likelihood_override ? *likelihood_override : compute_likelihood(distance_norm, speed_norm);
    s.potential = fear_potential({undesirability, s.likelihood, ig});
    s.threshold = threshold_;
    s.intensity = fear_intensity(s.potential, threshold_);
    std::tie(s.level, s.display) = classify(s.intensity);
    return s;
}

}  // namespace occ
