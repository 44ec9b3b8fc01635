#pragma once

#include "gvar/common.hpp"

namespace gvar {

/// A * B through the active kernel table.
Matrix matmul(const Matrix& a, const Matrix& b);

/// A^T * B.
Matrix crossprod(const Matrix& a, const Matrix& b);

/// A^T * A, symmetric by construction.
Matrix gram(const Matrix& a);

double max_abs(const Matrix& a);

/// 2-norm condition number (ratio of extreme singular values); inf when singular.
double condition_number(const Matrix& a);

/// Solves A X = B, refusing when cond(A) >= max_cond.
Matrix solve_checked(const Matrix& a, const Matrix& b, double max_cond, const std::string& what);

}  // namespace gvar
