#include "tensorplan/hypothesis_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tensorplan {

namespace {

constexpr double kBallSlack = 1e-9;  // relative, absorbs projection round-off

double ipow(double base, int exp) {
    double out = 1.0;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace

EluderBudget eluder_bound(int d, int num_actions, double b, int horizon, double eps) {
    if (d < 1 || num_actions < 1 || horizon < 1 || b <= 0.0 || eps <= 0.0)
        throw NonPositiveArgumentError("eluder_bound arguments must be positive");
    const double scale = ipow(static_cast<double>(horizon), num_actions) * eps;
    const double ratio = 2.0 * ipow(b + 1.0, num_actions) * ipow(3.0, num_actions) / scale;
    const double e = std::exp(1.0);
    const double raw = 3.0 * ipow(static_cast<double>(d) + 1.0, num_actions) * (e / (e - 1.0)) *
                           std::log(3.0 + 3.0 * ratio * ratio) +
                       1.0;
    EluderBudget out;
    out.dimension = static_cast<long long>(std::floor(raw));
    out.scale = scale;
    return out;
}

HypothesisSet::HypothesisSet(int d, int num_actions, double radius, double threshold,
                             long long budget)
    : d_(d), num_actions_(num_actions), radius_(radius), threshold_(threshold), budget_(budget) {
    if (d < 1 || num_actions < 1) throw NonPositiveArgumentError("dimensions must be positive");
    if (radius <= 0.0) throw NonPositiveArgumentError("radius must be positive");
    if (threshold < 0.0) throw NonPositiveArgumentError("threshold must be nonnegative");
}

bool HypothesisSet::membership(const Vector& theta) const {
    if (theta.size() != d_) return false;
    if (theta.norm() > radius_ * (1.0 + kBallSlack)) return false;
    for (const auto& t : constraints_) {
        if (std::abs(tensor_inner(*t, theta)) > threshold_) return false;
    }
    return true;
}

double HypothesisSet::max_violation(const Vector& theta) const {
    double worst = 0.0;
    for (const auto& t : constraints_)
        worst = std::max(worst, std::abs(tensor_inner(*t, theta)));
    return worst;
}

HypothesisSet HypothesisSet::append_constraint(const TensoredConstraint& t) const {
    Eigen::Index expect = 1;
    for (int a = 0; a < num_actions_; ++a) expect *= (d_ + 1);
    if (t.size() != expect)
        throw DimensionMismatchError("constraint length must be (d+1)^A");
    if (static_cast<long long>(constraints_.size()) + 1 > budget_ + 2)
        throw BudgetExceededError("constraint list exceeded the eluder budget");
    HypothesisSet out = *this;
    out.constraints_.push_back(std::make_shared<TensoredConstraint>(t));
    return out;
}

int HypothesisSet::constraint_rank() const {
    if (constraints_.empty()) return 0;
    const Eigen::Index m = constraints_.front()->size();
    Eigen::MatrixXd mat(m, static_cast<Eigen::Index>(constraints_.size()));
    for (std::size_t i = 0; i < constraints_.size(); ++i) mat.col(i) = *constraints_[i];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mat);
    qr.setThreshold(1e-8);
    return static_cast<int>(qr.rank());
}

namespace {

// Maximize <direction, theta> over {theta : rows * theta = rhs, ||theta|| <= B}.
// Returns false when the system is inconsistent or leaves the ball.
bool affine_slice_maximizer(const Eigen::MatrixXd& rows, const Vector& rhs,
                            const Vector& direction, double radius, Vector* out) {
    const Eigen::Index d = rows.cols();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(rows);
    Vector particular = cod.solve(rhs);
    if ((rows * particular - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) return false;
    if (particular.norm() > radius * (1.0 + 1e-12)) return false;

    // Null-space basis of `rows`.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
    lu.setThreshold(1e-10);
    Eigen::MatrixXd null_basis = lu.kernel();
    if (null_basis.cols() == 1 && null_basis.col(0).norm() == 0.0)
        null_basis = Eigen::MatrixXd(d, 0);

    if (null_basis.cols() == 0) {
        *out = particular;
        return true;
    }
    // Orthonormalize; the min-norm particular solution is orthogonal to the
    // kernel, so ||theta||^2 = ||particular||^2 + ||z||^2.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(null_basis);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, null_basis.cols());
    Vector g = q.transpose() * direction;
    const double room2 = radius * radius - particular.squaredNorm();
    if (room2 <= 0.0 || g.norm() == 0.0) {
        *out = particular;
        return true;
    }
    *out = particular + q * (g * (std::sqrt(room2) / g.norm()));
    return true;
}

struct Candidate {
    Vector theta;
    double objective;
};

}  // namespace

OptimisticChoice optimistic_select(const HypothesisSet& set, const Vector& direction,
                                   const OptimizerBudget& budget) {
    if (direction.size() != set.dim())
        throw DimensionMismatchError("direction dimension mismatch");
    const double b = set.radius();
    const int d = set.dim();
    const auto k = static_cast<int>(set.constraint_count());

    // Degenerate objective: any member will do, the origin by convention.
    if (direction.norm() == 0.0 && set.membership(Vector::Zero(d)))
        return OptimisticChoice{Vector::Zero(d), 0.0, 0.0};

    // Unconstrained set: the ball maximizer is exact.
    if (k == 0) {
        Vector theta = direction.norm() == 0.0 ? Vector::Zero(d)
                                               : Vector(b * direction / direction.norm());
        return OptimisticChoice{theta, direction.dot(theta), 0.0};
    }

    RngStream stream(budget.seed);
    std::vector<Candidate> feasible;
    auto consider = [&](const Vector& theta) {
        if (set.membership(theta)) feasible.push_back({theta, direction.dot(theta)});
    };

    consider(Vector::Zero(d));
    if (direction.norm() > 0.0) consider(Vector(b * direction / direction.norm()));

    // Exact candidates: pick one action per constraint, zero that factor.
    // Every product constraint then vanishes identically, so the candidate is
    // a member whenever the linear system is consistent inside the ball.
    // All-zero constraints are vacuous and impose no equation.
    {
        const int m = d + 1;
        std::vector<std::vector<Vector>> factors;
        for (int i = 0; i < k; ++i) {
            if (set.constraint(i).norm() == 0.0) continue;
            factors.push_back(rank_one_factors(set.constraint(i), m, set.num_actions()));
        }
        const int ka = static_cast<int>(factors.size());
        const double log_total = ka * std::log2(static_cast<double>(set.num_actions()));
        const bool enumerate_all =
            log_total <= std::log2(static_cast<double>(budget.max_assignments));
        const long long n_assign =
            enumerate_all ? static_cast<long long>(std::llround(std::pow(
                                static_cast<double>(set.num_actions()), ka)))
                          : std::min<long long>(budget.max_assignments, 256);
        RngStream assign_stream = stream.child("assignments");
        std::vector<int> pick(ka, 0);
        for (long long idx = 0; ka > 0 && idx < n_assign; ++idx) {
            if (enumerate_all) {
                long long rem = idx;
                for (int i = 0; i < ka; ++i) {
                    pick[i] = static_cast<int>(rem % set.num_actions());
                    rem /= set.num_actions();
                }
            } else {
                for (int i = 0; i < ka; ++i)
                    pick[i] = static_cast<int>(assign_stream.uniform_below(set.num_actions()));
            }
            Eigen::MatrixXd rows(ka, d);
            Vector rhs(ka);
            for (int i = 0; i < ka; ++i) {
                const Vector& f = factors[i][pick[i]];
                rows.row(i) = f.tail(d).transpose();
                rhs[i] = -f[0];
            }
            Vector theta;
            if (affine_slice_maximizer(rows, rhs, direction, b, &theta)) consider(theta);
        }
    }

    // Rejection sampling, uniform in the ball: Gaussian direction with the
    // d-th-root radius law.
    for (int i = 0; i < budget.n_samples; ++i) {
        Vector g(d);
        for (int j = 0; j < d; ++j) g[j] = stream.normal();
        const double gn = g.norm();
        if (gn == 0.0) continue;
        const double r = b * std::pow(stream.uniform(), 1.0 / d);
        consider(Vector(g * (r / gn)));
    }

    if (feasible.empty())
        throw InfeasibleWithinBudgetError("no hypothesis-set member found within budget");

    double best_obj = -std::numeric_limits<double>::infinity();
    double worst_obj = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < feasible.size(); ++i) {
        // Ties resolve to the lowest candidate index.
        if (feasible[i].objective > best_obj) {
            best_obj = feasible[i].objective;
            best_idx = i;
        }
        worst_obj = std::min(worst_obj, feasible[i].objective);
    }

    // Coordinate-wise polish with radial re-projection onto the ball.
    Vector theta = feasible[best_idx].theta;
    double obj = best_obj;
    double step = b / 2.0;
    for (int round = 0; round < budget.polish_rounds; ++round) {
        bool improved = false;
        for (int j = 0; j < d; ++j) {
            for (const double sign : {1.0, -1.0}) {
                Vector cand = theta;
                cand[j] += sign * step;
                if (cand.norm() > b) cand *= b / cand.norm();
                const double cand_obj = direction.dot(cand);
                if (cand_obj > obj && set.membership(cand)) {
                    theta = cand;
                    obj = cand_obj;
                    improved = true;
                }
            }
        }
        if (!improved) step /= 2.0;
        if (step < 1e-12 * b) break;
    }

    OptimisticChoice out;
    out.theta = theta;
    out.objective = obj;
    out.opt_gap = best_obj - worst_obj;
    return out;
}

}  // namespace tensorplan
