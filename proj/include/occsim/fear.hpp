#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "occsim/fuzzy.hpp"

namespace occ {

enum class FearLevel { VeryLow = 0, Low = 1, Medium = 2, High = 3, VeryHigh = 4 };

std::string to_string(FearLevel level);
FearLevel parse_fear_level(const std::string& text);

struct EmotionInputs {
    double undesirability = 1.0;
    double likelihood = 0.0;
    double ig = 1.0;
};

// One quantization cell: intensities below `below` (and at or above the
// previous cell's bound) map to this display plateau and level.
struct FearCell {
    double below;
    int display;
    FearLevel level;
};

struct FearState {
    double likelihood = 0.0;
    double potential = 0.0;
    double threshold = 0.0;
    double intensity = 0.0;
    FearLevel level = FearLevel::VeryLow;
    int display = 0;
};

double fear_intensity(double potential, double threshold);

std::pair<FearLevel, int> classify_level(double intensity, const std::vector<FearCell>& cells);

// The 125-rule ff base over undesirability, likelihood and ig with the
// weighted-mean consequent (likelihood counted twice, .5 rounds up).
std::string generate_ff_rules();

class FearModel {
public:
    FearModel(FuzzySystem likelihood, FuzzySystem ff, double threshold, std::vector<FearCell> cells);

    double compute_likelihood(double distance_norm, double speed_norm) const;
    double fear_potential(const EmotionInputs& in) const;
    std::pair<FearLevel, int> classify(double intensity) const { return classify_level(intensity, cells_); }

    // Full per-tick appraisal. A present override replaces the computed likelihood.
    FearState appraise(double distance_norm, double speed_norm, double undesirability, double ig,
                       std::optional<double> likelihood_override = std::nullopt) const;

    double threshold() const { return threshold_; }
    const std::vector<FearCell>& cells() const { return cells_; }
    const FuzzySystem& likelihood_system() const { return likelihood_; }
    const FuzzySystem& ff_system() const { return ff_; }

private:
    FuzzySystem likelihood_;
    FuzzySystem ff_;
    double threshold_;
    std::vector<FearCell> cells_;
};

}  // namespace occ
