#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "tensorplan/mdp_core.hpp"

namespace tensorplan {

// What the constructor guarantees about a generated environment, kept for
// oracle comparisons in tests and the harness.
struct RealizationCertificate {
    Vector theta_star;                       // realizing parameter, ||.||_2 = B
    std::vector<std::vector<double>> vstar;  // v*[h-1][s], h in 1..H+1
    double misspecification = 0.0;           // max_{h,s} |v* - <phi, theta*>| achieved
};

struct RealizableEnv {
    std::shared_ptr<TabularMdp> mdp;
    RealizationCertificate certificate;
};

struct TabularEnvOptions {
    bool deterministic = false;   // single-outcome transitions, fixed rewards
    int max_support = 3;          // outcomes per (s,a) in the stochastic case
    double value_spread = 1.0;    // soft cap on successor v* spread (see below)
};

// Random tabular MDP whose exact optimal values are linearly realized:
// features[h][s] = Q^T concat(v*_h(s)/B, w_hs) for a random orthogonal Q and
// filler vectors w_hs of norm 0.5*sqrt(1-(v*/B)^2); theta* = Q^T (B e_1).
// Requires H <= B so that v*/B stays in [0,1].
RealizableEnv make_tabular_realizable(int n_states, int num_actions, int horizon, int d, double b,
                                      std::uint64_t seed, const TabularEnvOptions& options = {});

// Additive feature perturbations u_hs with |<u_hs, theta*>| <= eta and
// post-perturbation norms <= 1. Updates the certificate's achieved
// misspecification.
RealizableEnv perturb_features(const RealizableEnv& env, double eta, std::uint64_t seed);

// Simulator with per-(s,a) reward shifts Lambda_sa ~ Uniform[-lambda, lambda]
// fixed at wrap time, rewards clipped to [0,1].
std::unique_ptr<FeaturizedSimulator> inaccurate_wrap(std::shared_ptr<const TabularMdp> env,
                                                     double lambda, std::uint64_t seed);

// The deterministic grid family on {-1,0,1}^d used by the lower-bound demo.
// Costs: 1/d per action, except `stay` at the goal which is free. The goal is
// absent for the uninformative variant. This family is cost-based
// (infinite-horizon shortest path) and deliberately exposes no reward-MDP
// view; it is not a planner input.
class HypercubeEnv {
  public:
    HypercubeEnv(int d, std::optional<std::vector<int>> goal);

    int dim() const { return d_; }
    bool has_goal() const { return goal_.has_value(); }
    const std::vector<int>& goal() const;

    long long n_states() const { return n_states_; }

    // Dense state index <-> coordinate vector in {-1,0,1}^d.
    long long index_of(const std::vector<int>& coords) const;
    std::vector<int> coords_of(long long index) const;
    long long origin() const;

    // Admissible moves from a state: (next index, cost). `stay` is always
    // first so callers can identify it.
    std::vector<std::pair<long long, double>> moves(long long state) const;
    int num_moves(long long state) const;

    // phi(s) = (1/d) * concat(d, s), dimension d+1.
    Vector features(long long state) const;

    // theta* = concat(-1, goal).
    Vector theta_star() const;

  private:
    int d_;
    std::optional<std::vector<int>> goal_;
    long long n_states_;
};

HypercubeEnv make_hypercube(int d, std::optional<std::vector<int>> goal);

// Closed-form optimal value -(1/d) * |s - s*|_1; requires a goal.
double hypercube_vstar(const HypercubeEnv& env, long long state);

// Shortest-path oracle via BFS on the deterministic move graph; returns the
// optimal cost-to-goal value (negated cost) for every state.
std::vector<double> hypercube_vstar_bfs(const HypercubeEnv& env);

}  // namespace tensorplan
