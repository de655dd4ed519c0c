#pragma once

#include <Eigen/Dense>

#include "symquad/extended.hpp"

// Eigen traits for the extended type.
#include <boost/multiprecision/eigen.hpp>

namespace symquad {

template <class Real> using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real> using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Singular values below rcond * sigma_max are treated as zero.
inline constexpr double kDefaultRcond = 1e-12;

/// Minimum-norm minimiser of |A w - b|_2 via a singular value decomposition.
template <class Real>
Vector<Real> least_squares_weights(const Matrix<Real>& a, const Vector<Real>& b,
                                   double rcond = kDefaultRcond);

extern template Vector<double> least_squares_weights(const Matrix<double>&, const Vector<double>&, double);
extern template Vector<Extended> least_squares_weights(const Matrix<Extended>&, const Vector<Extended>&,
                                                       double);

} // namespace symquad
