#include "symquad/linalg.hpp"

namespace symquad {

template <class Real>
Vector<Real> least_squares_weights(const Matrix<Real>& a, const Vector<Real>& b, double rcond) {
  if (a.cols() == 0) return Vector<Real>(0);
  Eigen::JacobiSVD<Matrix<Real>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(Real(rcond));
  return svd.solve(b);
}

template Vector<double> least_squares_weights(const Matrix<double>&, const Vector<double>&, double);
template Vector<Extended> least_squares_weights(const Matrix<Extended>&, const Vector<Extended>&, double);

} // namespace symquad
