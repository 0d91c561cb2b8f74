#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace imbench {

// Row-major so that a sample is a contiguous row, matching CSV layout and
// minibatch slicing.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

using Labels = std::vector<int>;
using IndexList = std::vector<std::size_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments outside an operation's contract.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Input data is malformed or degenerate (bad CSV row, too few classes, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace imbench
