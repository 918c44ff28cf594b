#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tensorplan/errors.hpp"
#include "tensorplan/rng.hpp"

namespace tensorplan {

using FeatureVector = Eigen::VectorXd;

// Opaque handle for an environment state. Tokens are issued sequentially by
// the simulator on first visit; the planner never fabricates one, it only
// passes back tokens obtained from simulator returns or GetAction inputs.
struct StateId {
    std::uint64_t token = 0;

    friend bool operator==(StateId a, StateId b) { return a.token == b.token; }
    friend bool operator!=(StateId a, StateId b) { return a.token != b.token; }
};

// One simulator transition. The reward already includes the per-(s,a)
// inaccuracy shift and the [0,1] clip.
struct SimStep {
    double reward = 0.0;
    StateId next_state;
    FeatureVector next_features;  // features of next_state at stage h+1
};

// Query accounting. per_call counts Simulate calls inside the current
// GetAction; per_episode accumulates across the episode's H calls.
struct QueryLedger {
    std::uint64_t per_call = 0;
    std::uint64_t per_episode = 0;
};

// One (s,a) outcome of a finite reward/next-state mixture.
struct Outcome {
    double prob = 0.0;
    double reward = 0.0;  // in [0,1]
    int next = 0;
};

// Explicit finite fixed-horizon MDP with per-stage feature tables.
// features[h-1][s] stores phi_h(s) for h in 1..H+1; the H+1 row is all zeros
// by convention.
struct TabularMdp {
    int n_states = 0;
    int num_actions = 0;
    int horizon = 0;
    int feature_dim = 0;
    // transitions[s][a] -> outcome mixture, probabilities summing to 1.
    std::vector<std::vector<std::vector<Outcome>>> transitions;
    std::vector<std::vector<FeatureVector>> features;
    std::vector<int> start_states;
    double lambda = 0.0;     // simulator inaccuracy bound
    std::uint64_t seed = 0;  // generation seed, kept for serialization

    void validate() const;
    const FeatureVector& phi(int h, int s) const { return features[h - 1][s]; }
    bool deterministic() const;
};

// Stationary MDP used on the discounted side of the reductions.
struct StationaryMdp {
    int n_states = 0;
    int num_actions = 0;
    int feature_dim = 0;
    std::vector<std::vector<std::vector<Outcome>>> transitions;
    std::vector<FeatureVector> features;  // stage-independent
    std::vector<int> start_states;
    std::uint64_t seed = 0;

    void validate() const;
};

// Versioned JSON round trip for TabularMdp.
std::string save_tabular_json(const TabularMdp& mdp);
TabularMdp load_tabular_json(const std::string& text);
void save_tabular_file(const TabularMdp& mdp, const std::string& path);
TabularMdp load_tabular_file(const std::string& path);

// Reward/next-feature sums over n i.i.d. draws of one (s,h,a); lets
// estimators avoid materializing every step.
struct TdAccumulator {
    double reward_sum = 0.0;
    FeatureVector feature_sum;
    long long count = 0;
};

// The local-access simulation oracle. Stepping is only allowed from states
// the planner has already been handed (locality); every returned reward is
// clip([R + Lambda_sa], 0, 1); every Simulate call is metered.
class FeaturizedSimulator {
  public:
    virtual ~FeaturizedSimulator() = default;

    virtual int feature_dim() const = 0;
    virtual int num_actions() const = 0;
    virtual int horizon() const = 0;

    // Start state of the environment (token issued at construction).
    virtual StateId start_state() const = 0;

    // Reset internal state to s0 and zero both ledger counters.
    virtual void reset_episode(StateId s0) = 0;

    // One fresh draw from Q_{sa}; increments the ledger by 1.
    virtual SimStep simulate(StateId s, int h, int a) = 0;

    // n draws for every action; ledger += n * A.
    std::vector<std::vector<SimStep>> batch_simulate(StateId s, int h, int n);

    // Streaming variant used by the TD estimators; ledger += n.
    virtual TdAccumulator accumulate(StateId s, int h, int a, int n);

    // Features of a previously visited state (locality-checked).
    virtual FeatureVector features(StateId s, int h) const = 0;

    // Marks the start of a GetAction call: zeroes per_call.
    void begin_call() { ledger_.per_call = 0; }

    QueryLedger query_count() const { return ledger_; }

    // Fold a worker clone's ledger back into this one.
    void merge_ledger(const QueryLedger& other) {
        ledger_.per_call += other.per_call;
        ledger_.per_episode += other.per_episode;
    }

    // Population-value access for the exact-expectation test mode. When
    // exact_expectation() is true, expected_step returns the exact expected
    // reward (after inaccuracy and clipping) and expected next-stage feature
    // vector of (s,h,a), charging a single query.
    virtual bool exact_expectation() const { return false; }
    virtual std::pair<double, FeatureVector> expected_step(StateId s, int h, int a);

    // Environment-transition path used by the episode driver; draws a fresh
    // next state but is not charged to the planner's ledger.
    virtual SimStep advance(StateId s, int h, int a) = 0;

    // Independent worker clone: shares the environment and the visited-state
    // snapshot, draws from a stream seeded by child_seed, starts with a zero
    // ledger.
    virtual std::unique_ptr<FeaturizedSimulator> clone(std::uint64_t child_seed) const = 0;

  protected:
    void charge(std::uint64_t n) {
        ledger_.per_call += n;
        ledger_.per_episode += n;
    }
    void zero_ledger() { ledger_ = QueryLedger{}; }

  private:
    QueryLedger ledger_;
};

// Simulator over an explicit TabularMdp. Per-(s,a) inaccuracy constants
// Lambda_sa ~ Uniform[-lambda, lambda] are drawn once at construction from a
// dedicated child stream, so runs are reproducible and repeated queries of a
// deterministic (s,a) return one constant reward.
class TabularSimulator : public FeaturizedSimulator {
  public:
    TabularSimulator(std::shared_ptr<const TabularMdp> mdp, std::uint64_t seed);

    int feature_dim() const override { return mdp_->feature_dim; }
    int num_actions() const override { return mdp_->num_actions; }
    int horizon() const override { return mdp_->horizon; }
    StateId start_state() const override { return start_; }

    void reset_episode(StateId s0) override;
    SimStep simulate(StateId s, int h, int a) override;
    TdAccumulator accumulate(StateId s, int h, int a, int n) override;
    FeatureVector features(StateId s, int h) const override;
    SimStep advance(StateId s, int h, int a) override;
    std::unique_ptr<FeaturizedSimulator> clone(std::uint64_t child_seed) const override;

    std::pair<double, FeatureVector> expected_step(StateId s, int h, int a) override;

    // Clipped reward actually delivered for outcome o of (s,a).
    double delivered_reward(int s, int a, double raw_reward) const;

    const TabularMdp& mdp() const { return *mdp_; }

  protected:
    TabularSimulator(const TabularSimulator&) = default;

    // Internal state index for a visited token; throws UnknownStateError.
    int resolve(StateId s) const;
    StateId token_for(int state);
    void check_stage_action(int h, int a) const;
    int draw_next(int s, int a, double* reward_out);

    std::shared_ptr<const TabularMdp> mdp_;
    std::vector<double> lambda_shift_;          // per (s,a)
    std::vector<std::vector<double>> cdf_;      // per (s,a) cumulative probs
    std::vector<std::uint64_t> token_of_state_; // 0 = not yet issued
    std::vector<int> state_of_token_;           // token -> state
    std::uint64_t next_token_ = 1;
    StateId start_;
    RngStream stream_;
};

// Test-mode variant whose expected_step returns population values.
class ExactTabularSimulator : public TabularSimulator {
  public:
    ExactTabularSimulator(std::shared_ptr<const TabularMdp> mdp, std::uint64_t seed)
        : TabularSimulator(std::move(mdp), seed) {}

    bool exact_expectation() const override { return true; }
    std::unique_ptr<FeaturizedSimulator> clone(std::uint64_t child_seed) const override;
};

}  // namespace tensorplan
