#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stgl {

using NodeId = std::int64_t;
using EdgeId = std::int64_t;
using Time = double;

template <typename S>
using VecX = Eigen::Vector<S, Eigen::Dynamic>;
template <typename S>
using RowVecX = Eigen::RowVector<S, Eigen::Dynamic>;
template <typename S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using VecXd = VecX<double>;
using MatXd = MatX<double>;
using VecXf = VecX<float>;
using MatXf = MatX<float>;

/// Bad input data (feature values, node ids, split ratios, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed file content; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::int64_t line)
      : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stgl
