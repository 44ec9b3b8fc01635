#include "gvar/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gvar/kernels.hpp"

namespace gvar {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw NumericalError("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  if (c.size() == 0) return c;
  if (a.cols() == 0) return Matrix::Zero(a.rows(), b.cols());
  kernels::active().gemm(a.rows(), b.cols(), a.cols(), a.data(), a.rows(), b.data(), b.rows(), 0.0, c.data(),
                         c.rows());
  return c;
}

Matrix crossprod(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw NumericalError("crossprod: row counts differ");
  Matrix c(a.cols(), b.cols());
  if (c.size() == 0) return c;
  kernels::active().crossprod(a.rows(), a.cols(), b.cols(), a.data(), a.rows(), b.data(), b.rows(), c.data(),
                              c.rows());
  return c;
}

Matrix gram(const Matrix& a) {
  const auto& k = kernels::active();
  const Index r = a.cols();
  Matrix c(r, r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i <= j; ++i) {
      c(i, j) = k.dot(a.rows(), a.col(i).data(), a.col(j).data());
      c(j, i) = c(i, j);
    }
  }
  return c;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double condition_number(const Matrix& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Matrix solve_checked(const Matrix& a, const Matrix& b, double max_cond, const std::string& what) {
  const double cond = condition_number(a);
  if (!(cond < max_cond)) {
    std::ostringstream msg;
    msg << what << " is numerically singular (condition number " << cond << ")";
    throw NumericalError(msg.str());
  }
  return a.partialPivLu().solve(b);
}

}  // namespace gvar
