#pragma once

#include <string>
#include <vector>

#include "occsim/fuzzy.hpp"

namespace oracle {

// Membership written as a min/max expression instead of branches.
double trimf(double l, double p, double r, double x);

struct Clipped {
    double l, p, r, h;  // triangle clipped at height h
};

// Centroid of max_k min(h_k, tri_k(x)) over [lo, hi] by the midpoint rule.
double riemann_centroid_max_min(const std::vector<Clipped>& parts, double lo, double hi, std::size_t cells);

// Rule-by-rule, sample-by-sample Mamdani evaluation with no grouping or
// precomputation. Mirrors the operator choices of `rb`.
double brute_force_mamdani(const occ::RuleBase& rb, const std::vector<double>& inputs, std::size_t samples);

}  // namespace oracle
