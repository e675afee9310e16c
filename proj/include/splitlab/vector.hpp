#pragma once

#include <Eigen/Dense>

namespace splitlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline void require_same_dim(const Vector& a, const Vector& b, const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace splitlab
