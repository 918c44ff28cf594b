#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "tensorplan/errors.hpp"
#include "tensorplan/rng.hpp"
#include "tensorplan/tensor_algebra.hpp"

namespace tensorplan {

// Closed-form eluder-dimension bound for the tensorized clipped-linear class
// at scale H^A * eps, together with that scale.
struct EluderBudget {
    long long dimension = 0;  // E_d
    double scale = 0.0;       // H^A * eps
};

EluderBudget eluder_bound(int d, int num_actions, double b, int horizon, double eps);

// Sol(X): the norm-B ball intersected with |<T_i, ⊗_a concat(1,theta)>| <=
// threshold for every stored constraint. Immutable; append returns a new set
// sharing the constraint prefix.
class HypothesisSet {
  public:
    HypothesisSet(int d, int num_actions, double radius, double threshold, long long budget);

    int dim() const { return d_; }
    int num_actions() const { return num_actions_; }
    double radius() const { return radius_; }
    double threshold() const { return threshold_; }
    long long budget() const { return budget_; }
    std::size_t constraint_count() const { return constraints_.size(); }
    const TensoredConstraint& constraint(std::size_t i) const { return *constraints_[i]; }

    bool membership(const Vector& theta) const;

    // Largest |<T_i, M_theta>| across constraints (0 when empty).
    double max_violation(const Vector& theta) const;

    [[nodiscard]] HypothesisSet append_constraint(const TensoredConstraint& t) const;

    // Numerical rank of the constraint matrix at relative tolerance 1e-8.
    int constraint_rank() const;

  private:
    int d_;
    int num_actions_;
    double radius_;
    double threshold_;
    long long budget_;
    std::vector<std::shared_ptr<const TensoredConstraint>> constraints_;
};

struct OptimizerBudget {
    int n_samples = 20000;
    int polish_rounds = 40;
    // Cap on enumerated per-constraint action assignments for the exact
    // candidate generator; above it a seeded random subset is used.
    int max_assignments = 65536;
    std::uint64_t seed = 0;
};

struct OptimisticChoice {
    Vector theta;
    double objective = 0.0;
    // Objective spread across surviving (feasible) candidates; a reported
    // optimality-gap estimate, not a certified bound.
    double opt_gap = 0.0;
};

// Approximate argmax of <direction, theta> over the hypothesis set.
// Candidates come from (1) the exact ball maximizer and the origin, (2) exact
// solutions of per-constraint one-factor-zero linear systems (each choice of
// one action per constraint makes every product constraint vanish exactly),
// (3) uniform rejection samples in the ball; feasible candidates are polished
// by coordinate search with radial re-projection. Deterministic given the
// budget seed. Throws InfeasibleWithinBudgetError when nothing is feasible.
OptimisticChoice optimistic_select(const HypothesisSet& set, const Vector& direction,
                                   const OptimizerBudget& budget);

}  // namespace tensorplan
