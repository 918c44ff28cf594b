#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tensorplan/errors.hpp"

namespace tensorplan {

using Vector = Eigen::VectorXd;

// (d+1)-dimensional temporal-difference estimate: concat(reward part,
// feature-difference part). Euclidean norm <= 3 for [0,1] rewards and
// 1-bounded features.
using TdVector = Eigen::VectorXd;

// Flattened A-fold tensor product of TdVectors, length (d+1)^A.
using TensoredConstraint = Eigen::VectorXd;

// out[0] = x, out[1..d] = v.
Vector concat_scalar(double x, const Vector& v);

// Flatten of the outer product of the given factors. The index bijection is
// row-major with the first factor as the slowest-varying axis:
//   out[flat(j1,...,jA)] = prod_a vs[a][j_a],
//   flat(j1,...,jA) = ((j1*m + j2)*m + j3)*m + ... with m = len of a factor.
// All factors must share one length.
TensoredConstraint tensor_flatten(const std::vector<Vector>& vs);

// <T, flatten(⊗_a concat(1, theta))> computed by contracting one axis at a
// time; equals prod_a <Delta_a, concat(1,theta)> when T is a flattened outer
// product of the Delta_a.
double tensor_inner(const TensoredConstraint& t, const Vector& theta);

// Number of tensor axes of a flattened constraint of length (d+1)^A.
int tensor_order(Eigen::Index flat_size, Eigen::Index axis_size);

// Radial projection onto the centered ball of the given radius.
Vector clip_to_ball(const Vector& x, double bound);

// Factors of a rank-one flattened tensor, recovered per axis by power
// iteration on the axis unfolding. Factors come back unit-norm up to sign;
// zero input yields zero factors. Exact for tensors built by tensor_flatten.
std::vector<Vector> rank_one_factors(const TensoredConstraint& t, int axis_size, int order);

}  // namespace tensorplan
