#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace gvar {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Failure categories; the CLI maps them onto exit codes.
enum class ErrorKind { input, identification, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Malformed files, bad configuration, violated preconditions on user data.
class InputError : public Error {
public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

/// Singular, rank-deficient or otherwise ill-posed numerical problems.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class IdentificationError : public Error {
public:
  explicit IdentificationError(const std::string& what) : Error(ErrorKind::identification, what) {}
};

}  // namespace gvar
