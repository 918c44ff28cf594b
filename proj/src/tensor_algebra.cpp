#include "tensorplan/tensor_algebra.hpp"

#include <cmath>

namespace tensorplan {

Vector concat_scalar(double x, const Vector& v) {
    Vector out(v.size() + 1);
    out[0] = x;
    out.tail(v.size()) = v;
    return out;
}

TensoredConstraint tensor_flatten(const std::vector<Vector>& vs) {
    if (vs.empty()) throw DimensionMismatchError("tensor_flatten needs at least one factor");
    const Eigen::Index m = vs.front().size();
    for (const auto& v : vs) {
        if (v.size() != m) throw DimensionMismatchError("tensor factors must share one length");
    }
    TensoredConstraint out = vs.front();
    for (std::size_t a = 1; a < vs.size(); ++a) {
        TensoredConstraint next(out.size() * m);
        for (Eigen::Index i = 0; i < out.size(); ++i)
            next.segment(i * m, m) = out[i] * vs[a];
        out.swap(next);
    }
    return out;
}

int tensor_order(Eigen::Index flat_size, Eigen::Index axis_size) {
    if (axis_size < 1) throw DimensionMismatchError("axis size must be positive");
    int order = 0;
    Eigen::Index n = 1;
    while (n < flat_size) {
        n *= axis_size;
        ++order;
    }
    if (n != flat_size || order == 0)
        throw DimensionMismatchError("flat size is not a power of the axis size");
    return order;
}

double tensor_inner(const TensoredConstraint& t, const Vector& theta) {
    const Eigen::Index m = theta.size() + 1;
    const int order = tensor_order(t.size(), m);
    Vector lift = concat_scalar(1.0, theta);
    // Contract the last (fastest-varying) axis with the lift, repeatedly.
    Vector cur = t;
    for (int axis = 0; axis < order; ++axis) {
        const Eigen::Index rows = cur.size() / m;
        Vector next(rows);
        for (Eigen::Index i = 0; i < rows; ++i)
            next[i] = cur.segment(i * m, m).dot(lift);
        cur.swap(next);
    }
    return cur[0];
}

Vector clip_to_ball(const Vector& x, double bound) {
    if (bound <= 0.0) throw NonPositiveArgumentError("clip_to_ball bound must be positive");
    const double n = x.norm();
    if (n <= bound || n == 0.0) return x;
    return x * (bound / n);
}

std::vector<Vector> rank_one_factors(const TensoredConstraint& t, int axis_size, int order) {
    if (axis_size < 1 || order < 1)
        throw DimensionMismatchError("rank_one_factors needs positive axis size and order");
    Eigen::Index expect = 1;
    for (int a = 0; a < order; ++a) expect *= axis_size;
    if (t.size() != expect)
        throw DimensionMismatchError("constraint length does not match (axis_size)^order");

    std::vector<Vector> factors;
    factors.reserve(order);
    if (t.norm() == 0.0) {
        for (int a = 0; a < order; ++a) factors.emplace_back(Vector::Zero(axis_size));
        return factors;
    }

    const Eigen::Index m = axis_size;
    for (int axis = 0; axis < order; ++axis) {
        // Unfold along `axis`: rows indexed by j_axis, columns by the rest.
        Eigen::Index inner = 1;  // product of sizes of axes after `axis`
        for (int a = axis + 1; a < order; ++a) inner *= m;
        const Eigen::Index outer = t.size() / (inner * m);

        Eigen::MatrixXd unfolding(m, outer * inner);
        for (Eigen::Index o = 0; o < outer; ++o)
            for (Eigen::Index j = 0; j < m; ++j)
                for (Eigen::Index i = 0; i < inner; ++i)
                    unfolding(j, o * inner + i) = t[(o * m + j) * inner + i];

        // Power iteration on unfolding * unfolding^T (m x m, m is small).
        // Start from the heaviest Gram column: for a rank-one input that is
        // already proportional to the factor, so one multiply converges.
        const Eigen::MatrixXd gram = unfolding * unfolding.transpose();
        Eigen::Index pivot = 0;
        gram.diagonal().maxCoeff(&pivot);
        Vector v = gram.col(pivot);
        if (v.norm() == 0.0) v = Vector::Ones(m);
        v.normalize();
        for (int it = 0; it < 100; ++it) {
            Vector next = gram * v;
            const double n = next.norm();
            if (n == 0.0) break;
            next /= n;
            if ((next - v).norm() < 1e-15 || (next + v).norm() < 1e-15) {
                v = next;
                break;
            }
            v = next;
        }
        // Fix the sign so the output is deterministic: first nonzero entry > 0.
        for (Eigen::Index i = 0; i < m; ++i) {
            if (std::abs(v[i]) > 1e-14) {
                if (v[i] < 0.0) v = -v;
                break;
            }
        }
        factors.push_back(std::move(v));
    }
    return factors;
}

}  // namespace tensorplan
