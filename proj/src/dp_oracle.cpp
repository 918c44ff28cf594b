#include "tensorplan/dp_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

namespace tensorplan {

namespace {

double q_value(const std::vector<Outcome>& mix, const std::vector<double>& next_values) {
    double q = 0.0;
    for (const auto& o : mix) q += o.prob * (o.reward + next_values[o.next]);
    return q;
}

}  // namespace

VstarResult finite_horizon_vstar(const TabularMdp& mdp) {
    VstarResult out;
    out.values.horizon = mdp.horizon;
    out.values.v.assign(mdp.horizon + 1, std::vector<double>(mdp.n_states, 0.0));
    out.greedy.assign(mdp.horizon, std::vector<int>(mdp.n_states, 0));
    for (int h = mdp.horizon; h >= 1; --h) {
        const auto& next = out.values.v[h];
        for (int s = 0; s < mdp.n_states; ++s) {
            double best = -1.0;
            int best_a = 0;
            for (int a = 0; a < mdp.num_actions; ++a) {
                const double q = q_value(mdp.transitions[s][a], next);
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            out.values.v[h - 1][s] = best;
            out.greedy[h - 1][s] = best_a;
        }
    }
    return out;
}

ValueTable policy_eval(const TabularMdp& mdp, const StagePolicy& pi) {
    ValueTable out;
    out.horizon = mdp.horizon;
    out.v.assign(mdp.horizon + 1, std::vector<double>(mdp.n_states, 0.0));
    for (int h = mdp.horizon; h >= 1; --h) {
        const auto& next = out.v[h];
        for (int s = 0; s < mdp.n_states; ++s) {
            const int a = pi[h - 1][s];
            if (a < 0 || a >= mdp.num_actions)
                throw ActionOutOfRangeError("policy action out of range");
            out.v[h - 1][s] = q_value(mdp.transitions[s][a], next);
        }
    }
    return out;
}

std::vector<double> discounted_vstar(const StationaryMdp& mdp, double gamma, double tol) {
    if (gamma < 0.0 || gamma >= 1.0) throw OutOfRangeError("gamma must be in [0,1)");
    if (tol <= 0.0) throw NonPositiveArgumentError("tol must be positive");
    std::vector<double> v(mdp.n_states, 0.0);
    std::vector<double> next(mdp.n_states, 0.0);
    // Residual threshold guaranteeing |v - v*|_inf <= tol for the returned v.
    const double residual_stop = gamma > 0.0 ? tol * (1.0 - gamma) / (2.0 * gamma) : 0.0;
    for (int sweep = 0; sweep < 1000000; ++sweep) {
        double residual = 0.0;
        for (int s = 0; s < mdp.n_states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < mdp.num_actions; ++a) {
                double q = 0.0;
                for (const auto& o : mdp.transitions[s][a])
                    q += o.prob * (o.reward + gamma * v[o.next]);
                best = std::max(best, q);
            }
            next[s] = best;
            residual = std::max(residual, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (gamma == 0.0) break;  // one sweep is exact
        if (residual <= residual_stop) break;
    }
    return v;
}

std::vector<double> discounted_policy_eval(const StationaryMdp& mdp, const std::vector<int>& pi,
                                           double gamma) {
    if (gamma < 0.0 || gamma >= 1.0) throw OutOfRangeError("gamma must be in [0,1)");
    const int n = mdp.n_states;
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd r(n);
    for (int s = 0; s < n; ++s) {
        const int a = pi[s];
        if (a < 0 || a >= mdp.num_actions) throw ActionOutOfRangeError("policy action out of range");
        double reward = 0.0;
        for (const auto& o : mdp.transitions[s][a]) {
            system(s, o.next) -= gamma * o.prob;
            reward += o.prob * o.reward;
        }
        r[s] = reward;
    }
    Eigen::VectorXd v = system.partialPivLu().solve(r);
    return std::vector<double>(v.data(), v.data() + n);
}

std::string value_table_csv(const ValueTable& table) {
    std::ostringstream out;
    out << "h,state,value\n";
    out.precision(17);
    for (int h = 1; h <= table.horizon + 1; ++h)
        for (std::size_t s = 0; s < table.v[h - 1].size(); ++s)
            out << h << ',' << s << ',' << table.v[h - 1][s] << '\n';
    return out.str();
}

}  // namespace tensorplan
