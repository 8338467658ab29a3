#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

// Error targets shared by the special-function and quadrature layers.
// Defaults give >= 10 significant digits, which the downstream
// root-finding needs.
struct AccuracyPolicy {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_quad_nodes = 4096;

  void validate() const {
    if (abs_tol <= 0 || rel_tol <= 0 || max_quad_nodes < 16)
      throw std::invalid_argument("AccuracyPolicy: abs_tol, rel_tol must be > 0 and max_quad_nodes >= 16");
  }
};

// Thrown when an adaptive quadrature stalls before reaching the target.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_error(achieved) {}
  double achieved_error;
};

}  // namespace blowup
