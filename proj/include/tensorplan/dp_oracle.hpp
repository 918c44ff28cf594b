#pragma once

#include <string>
#include <vector>

#include "tensorplan/mdp_core.hpp"

namespace tensorplan {

// v[h-1][s] for h in 1..H+1; the terminal row is all zeros.
struct ValueTable {
    int horizon = 0;
    std::vector<std::vector<double>> v;

    double at(int h, int s) const { return v[h - 1][s]; }
};

// pi[h-1][s] in 0..A-1 for h in 1..H.
using StagePolicy = std::vector<std::vector<int>>;

struct VstarResult {
    ValueTable values;
    StagePolicy greedy;  // ties broken to the lowest action index
};

// Backward induction on the Bellman optimality equations.
VstarResult finite_horizon_vstar(const TabularMdp& mdp);

// Backward induction for a fixed deterministic stage policy.
ValueTable policy_eval(const TabularMdp& mdp, const StagePolicy& pi);

// Value iteration to sup-norm accuracy tol against the fixed point.
std::vector<double> discounted_vstar(const StationaryMdp& mdp, double gamma, double tol);

// Exact discounted evaluation of a stationary deterministic policy via the
// linear system (I - gamma * P_pi) v = r_pi.
std::vector<double> discounted_policy_eval(const StationaryMdp& mdp, const std::vector<int>& pi,
                                           double gamma);

// CSV export: header "h,state,value", one row per (h, s).
std::string value_table_csv(const ValueTable& table);

}  // namespace tensorplan
