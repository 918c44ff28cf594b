#include "tensorplan/mdp_core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tensorplan {

namespace {

constexpr double kProbTol = 1e-12;

double clip01(double x) { return std::max(0.0, std::min(1.0, x)); }

void validate_transitions(const std::vector<std::vector<std::vector<Outcome>>>& transitions,
                          int n_states, int num_actions) {
    if (static_cast<int>(transitions.size()) != n_states)
        throw ValidationError("transition table has wrong number of states");
    for (int s = 0; s < n_states; ++s) {
        if (static_cast<int>(transitions[s].size()) != num_actions)
            throw ValidationError("transition table has wrong number of actions");
        for (int a = 0; a < num_actions; ++a) {
            const auto& mix = transitions[s][a];
            if (mix.empty()) throw ValidationError("empty outcome mixture");
            double total = 0.0;
            for (const auto& o : mix) {
                if (o.prob < 0.0) throw ValidationError("negative outcome probability");
                if (o.reward < 0.0 || o.reward > 1.0)
                    throw ValidationError("reward outside [0,1]");
                if (o.next < 0 || o.next >= n_states)
                    throw ValidationError("outcome next-state out of range");
                total += o.prob;
            }
            if (std::abs(total - 1.0) > kProbTol)
                throw ValidationError("outcome probabilities do not sum to 1");
        }
    }
}

}  // namespace

void TabularMdp::validate() const {
    if (n_states <= 0 || num_actions <= 0 || horizon <= 0 || feature_dim <= 0)
        throw ValidationError("TabularMdp dimensions must be positive");
    validate_transitions(transitions, n_states, num_actions);
    if (static_cast<int>(features.size()) != horizon + 1)
        throw ValidationError("feature table must cover stages 1..H+1");
    for (int h = 0; h <= horizon; ++h) {
        if (static_cast<int>(features[h].size()) != n_states)
            throw ValidationError("feature table has wrong number of states");
        for (const auto& f : features[h]) {
            if (f.size() != feature_dim)
                throw ValidationError("feature vector has wrong dimension");
            if (f.norm() > 1.0 + 1e-9)
                throw ValidationError("feature norm exceeds 1");
        }
    }
    for (const auto& f : features[horizon]) {
        if (f.norm() != 0.0) throw ValidationError("stage H+1 features must be zero");
    }
    if (start_states.empty()) throw ValidationError("no start states");
    for (int s : start_states) {
        if (s < 0 || s >= n_states) throw ValidationError("start state out of range");
    }
    if (lambda < 0.0) throw ValidationError("lambda must be nonnegative");
}

bool TabularMdp::deterministic() const {
    for (const auto& per_state : transitions)
        for (const auto& mix : per_state)
            if (mix.size() != 1) return false;
    return true;
}

void StationaryMdp::validate() const {
    if (n_states <= 0 || num_actions <= 0 || feature_dim <= 0)
        throw ValidationError("StationaryMdp dimensions must be positive");
    validate_transitions(transitions, n_states, num_actions);
    if (static_cast<int>(features.size()) != n_states)
        throw ValidationError("feature table has wrong number of states");
    for (const auto& f : features) {
        if (f.size() != feature_dim) throw ValidationError("feature vector has wrong dimension");
        if (f.norm() > 1.0 + 1e-9) throw ValidationError("feature norm exceeds 1");
    }
    if (start_states.empty()) throw ValidationError("no start states");
}

std::string save_tabular_json(const TabularMdp& mdp) {
    nlohmann::json j;
    j["version"] = 1;
    j["states"] = mdp.n_states;
    j["actions"] = mdp.num_actions;
    j["H"] = mdp.horizon;
    j["d"] = mdp.feature_dim;
    j["lambda"] = mdp.lambda;
    j["seed"] = mdp.seed;
    j["start_states"] = mdp.start_states;
    auto& trans = j["transitions"];
    trans = nlohmann::json::array();
    for (int s = 0; s < mdp.n_states; ++s) {
        nlohmann::json per_state = nlohmann::json::array();
        for (int a = 0; a < mdp.num_actions; ++a) {
            nlohmann::json mix = nlohmann::json::array();
            for (const auto& o : mdp.transitions[s][a])
                mix.push_back({o.prob, o.reward, o.next});
            per_state.push_back(std::move(mix));
        }
        trans.push_back(std::move(per_state));
    }
    auto& feats = j["features"];
    feats = nlohmann::json::array();
    for (int h = 0; h <= mdp.horizon; ++h) {
        nlohmann::json per_stage = nlohmann::json::array();
        for (int s = 0; s < mdp.n_states; ++s) {
            const auto& f = mdp.features[h][s];
            std::vector<double> v(f.data(), f.data() + f.size());
            per_stage.push_back(std::move(v));
        }
        feats.push_back(std::move(per_stage));
    }
    return j.dump(2);
}

TabularMdp load_tabular_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("environment JSON parse error: ") + e.what());
    }
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw ValidationError("unsupported environment schema version");
    TabularMdp mdp;
    try {
        mdp.n_states = j.at("states").get<int>();
        mdp.num_actions = j.at("actions").get<int>();
        mdp.horizon = j.at("H").get<int>();
        mdp.feature_dim = j.at("d").get<int>();
        mdp.lambda = j.at("lambda").get<double>();
        mdp.seed = j.at("seed").get<std::uint64_t>();
        mdp.start_states = j.at("start_states").get<std::vector<int>>();
        for (const auto& per_state : j.at("transitions")) {
            std::vector<std::vector<Outcome>> row;
            for (const auto& mix_json : per_state) {
                std::vector<Outcome> mix;
                for (const auto& o : mix_json) {
                    mix.push_back(Outcome{o.at(0).get<double>(), o.at(1).get<double>(),
                                          o.at(2).get<int>()});
                }
                row.push_back(std::move(mix));
            }
            mdp.transitions.push_back(std::move(row));
        }
        for (const auto& per_stage : j.at("features")) {
            std::vector<FeatureVector> row;
            for (const auto& fj : per_stage) {
                auto v = fj.get<std::vector<double>>();
                row.push_back(Eigen::Map<const FeatureVector>(v.data(), v.size()));
            }
            mdp.features.push_back(std::move(row));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("environment JSON field error: ") + e.what());
    }
    mdp.validate();
    return mdp;
}

void save_tabular_file(const TabularMdp& mdp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << save_tabular_json(mdp) << '\n';
}

TabularMdp load_tabular_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_tabular_json(ss.str());
}

std::vector<std::vector<SimStep>> FeaturizedSimulator::batch_simulate(StateId s, int h, int n) {
    if (n < 1) throw InvalidSampleCountError("batch_simulate requires n >= 1");
    std::vector<std::vector<SimStep>> out(num_actions());
    for (int a = 1; a <= num_actions(); ++a) {
        out[a - 1].reserve(n);
        for (int l = 0; l < n; ++l) out[a - 1].push_back(simulate(s, h, a));
    }
    return out;
}

TdAccumulator FeaturizedSimulator::accumulate(StateId s, int h, int a, int n) {
    if (n < 1) throw InvalidSampleCountError("accumulate requires n >= 1");
    TdAccumulator acc;
    acc.feature_sum = FeatureVector::Zero(feature_dim());
    for (int l = 0; l < n; ++l) {
        SimStep step = simulate(s, h, a);
        acc.reward_sum += step.reward;
        acc.feature_sum += step.next_features;
    }
    acc.count = n;
    return acc;
}

std::pair<double, FeatureVector> FeaturizedSimulator::expected_step(StateId, int, int) {
    throw Error("expected_step requires an exact-expectation simulator");
}

TabularSimulator::TabularSimulator(std::shared_ptr<const TabularMdp> mdp, std::uint64_t seed)
    : mdp_(std::move(mdp)),
      token_of_state_(mdp_->n_states, 0),
      stream_(RngStream(seed).child("tabular-sim")) {
    mdp_->validate();
    state_of_token_.push_back(-1);  // token 0 never issued

    const int S = mdp_->n_states;
    const int A = mdp_->num_actions;
    lambda_shift_.assign(static_cast<std::size_t>(S) * A, 0.0);
    if (mdp_->lambda > 0.0) {
        RngStream shift_stream = RngStream(seed).child("inaccuracy");
        for (auto& v : lambda_shift_) v = shift_stream.uniform_in(-mdp_->lambda, mdp_->lambda);
    }
    cdf_.resize(static_cast<std::size_t>(S) * A);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            const auto& mix = mdp_->transitions[s][a];
            auto& cdf = cdf_[static_cast<std::size_t>(s) * A + a];
            cdf.reserve(mix.size());
            double total = 0.0;
            for (const auto& o : mix) {
                total += o.prob;
                cdf.push_back(total);
            }
            cdf.back() = 1.0;
        }
    }
    start_ = token_for(mdp_->start_states.front());
}

double TabularSimulator::delivered_reward(int s, int a, double raw_reward) const {
    return clip01(raw_reward + lambda_shift_[static_cast<std::size_t>(s) * mdp_->num_actions + a]);
}

int TabularSimulator::resolve(StateId s) const {
    if (s.token == 0 || s.token >= next_token_)
        throw UnknownStateError("state token was never issued by this simulator");
    return state_of_token_[s.token];
}

StateId TabularSimulator::token_for(int state) {
    auto& slot = token_of_state_[state];
    if (slot == 0) {
        slot = next_token_++;
        state_of_token_.push_back(state);
    }
    return StateId{slot};
}

void TabularSimulator::check_stage_action(int h, int a) const {
    if (h < 1 || h > mdp_->horizon) throw StageOutOfRangeError("stage out of [1,H]");
    if (a < 1 || a > mdp_->num_actions) throw ActionOutOfRangeError("action out of [1,A]");
}

int TabularSimulator::draw_next(int s, int a, double* reward_out) {
    const auto& cdf = cdf_[static_cast<std::size_t>(s) * mdp_->num_actions + a - 1];
    const auto& mix = mdp_->transitions[s][a - 1];
    const std::size_t idx = stream_.sample_cdf(cdf);
    *reward_out = delivered_reward(s, a - 1, mix[idx].reward);
    return mix[idx].next;
}

void TabularSimulator::reset_episode(StateId s0) {
    resolve(s0);  // locality check
    zero_ledger();
}

SimStep TabularSimulator::simulate(StateId s, int h, int a) {
    const int state = resolve(s);
    check_stage_action(h, a);
    charge(1);
    double reward;
    const int next = draw_next(state, a, &reward);
    SimStep step;
    step.reward = reward;
    step.next_state = token_for(next);
    step.next_features = mdp_->phi(h + 1, next);
    return step;
}

TdAccumulator TabularSimulator::accumulate(StateId s, int h, int a, int n) {
    if (n < 1) throw InvalidSampleCountError("accumulate requires n >= 1");
    const int state = resolve(s);
    check_stage_action(h, a);
    charge(static_cast<std::uint64_t>(n));
    TdAccumulator acc;
    acc.feature_sum = FeatureVector::Zero(mdp_->feature_dim);
    const auto& next_feats = mdp_->features[h];  // stage h+1 row
    for (int l = 0; l < n; ++l) {
        double reward;
        const int next = draw_next(state, a, &reward);
        token_for(next);
        acc.reward_sum += reward;
        acc.feature_sum += next_feats[next];
    }
    acc.count = n;
    return acc;
}

FeatureVector TabularSimulator::features(StateId s, int h) const {
    const int state = resolve(s);
    if (h < 1 || h > mdp_->horizon + 1) throw StageOutOfRangeError("stage out of [1,H+1]");
    return mdp_->phi(h, state);
}

SimStep TabularSimulator::advance(StateId s, int h, int a) {
    const int state = resolve(s);
    check_stage_action(h, a);
    double reward;
    const int next = draw_next(state, a, &reward);
    SimStep step;
    step.reward = reward;
    step.next_state = token_for(next);
    step.next_features = mdp_->phi(h + 1, next);
    return step;
}

std::unique_ptr<FeaturizedSimulator> TabularSimulator::clone(std::uint64_t child_seed) const {
    auto copy = std::unique_ptr<TabularSimulator>(new TabularSimulator(*this));
    copy->stream_ = RngStream(child_seed);
    copy->zero_ledger();
    return copy;
}

std::pair<double, FeatureVector> TabularSimulator::expected_step(StateId s, int h, int a) {
    if (!exact_expectation())
        throw Error("expected_step requires an exact-expectation simulator");
    const int state = resolve(s);
    check_stage_action(h, a);
    charge(1);
    const auto& mix = mdp_->transitions[state][a - 1];
    double reward = 0.0;
    FeatureVector feat = FeatureVector::Zero(mdp_->feature_dim);
    for (const auto& o : mix) {
        reward += o.prob * delivered_reward(state, a - 1, o.reward);
        feat += o.prob * mdp_->phi(h + 1, o.next);
    }
    return {reward, std::move(feat)};
}

std::unique_ptr<FeaturizedSimulator> ExactTabularSimulator::clone(std::uint64_t child_seed) const {
    auto copy = std::unique_ptr<ExactTabularSimulator>(new ExactTabularSimulator(*this));
    copy->stream_ = RngStream(child_seed);
    copy->zero_ledger();
    return copy;
}

}  // namespace tensorplan
