#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <algorithm>
#include <limits>
#include <vector>

namespace gasflow {

using Triplet = Eigen::Triplet<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sparse NLP in the form
//   min f(x)
//   s.t. cE(x) = 0,  cl <= cI(x) <= cu,  xl <= x <= xu.
// Jacobians and the Lagrangian Hessian are reported as triplet lists whose
// sparsity pattern must not change between calls. The Hessian is the lower
// triangle of  sigma * grad^2 f + sum_i yE_i grad^2 cE_i + sum_j yI_j grad^2 cI_j.
class SparseNlp {
 public:
  virtual ~SparseNlp() = default;

  virtual int num_vars() const = 0;
  virtual int num_eq() const = 0;
  virtual int num_ineq() const = 0;

  virtual void bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const = 0;
  virtual void ineq_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const = 0;

  virtual double objective(const Eigen::VectorXd& x) const = 0;
  virtual void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& g) const = 0;
  virtual void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& ce,
                           Eigen::VectorXd& ci) const = 0;
  virtual void jacobians(const Eigen::VectorXd& x, std::vector<Triplet>& je,
                         std::vector<Triplet>& ji) const = 0;
  virtual void lagrangian_hessian(const Eigen::VectorXd& x, double sigma,
                                  const Eigen::VectorXd& ye,
                                  const Eigen::VectorXd& yi,
                                  std::vector<Triplet>& h) const = 0;

  // Midpoint of the box, zero where the box is unbounded.
  virtual void initial_point(Eigen::VectorXd& x) const {
    Eigen::VectorXd lo, hi;
    bounds(lo, hi);
    x.resize(num_vars());
    for (int i = 0; i < num_vars(); ++i) {
      if (std::isfinite(lo[i]) && std::isfinite(hi[i])) {
        x[i] = 0.5 * (lo[i] + hi[i]);
      } else if (std::isfinite(lo[i])) {
        x[i] = lo[i] + 1.0;
      } else if (std::isfinite(hi[i])) {
        x[i] = hi[i] - 1.0;
      } else {
        x[i] = 0.0;
      }
    }
  }
};

}  // namespace gasflow
