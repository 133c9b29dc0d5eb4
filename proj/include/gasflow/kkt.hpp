#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>

namespace gasflow {

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

// LDL^T factorization of a sparse symmetric indefinite matrix with AMD
// ordering and no numerical pivoting. Without pivoting the factorization of a
// saddle-point matrix can break down unless the matrix is quasi-definite;
// callers detect that through factorize() returning false or through the
// inertia count and respond by increasing the primal regularization. The
// sparsity pattern must be identical across calls (symbolic analysis runs
// once); pass explicit zeros to keep structural entries alive.
class KktSolver {
 public:
  // A holds the lower triangle. Returns false on numerical breakdown.
  bool factorize(const Eigen::SparseMatrix<double>& A) {
    if (!analyzed_) {
      solver_.analyzePattern(A);
      analyzed_ = true;
    }
    solver_.factorize(A);
    if (solver_.info() != Eigen::Success) return false;
    const auto& d = solver_.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!std::isfinite(d[i])) return false;
    }
    // near-absolute threshold: regularized saddle systems legitimately carry
    // pivots as small as the dual regularization (~1e-8) next to barrier
    // pivots of 1e12 or more, so a dmax-relative cutoff would misread them
    const double tiny = 1e-100;
    inertia_ = {};
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d[i] > tiny) {
        ++inertia_.positive;
      } else if (d[i] < -tiny) {
        ++inertia_.negative;
      } else {
        ++inertia_.zero;
      }
    }
    return true;
  }

  const Inertia& inertia() const { return inertia_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    return solver_.solve(b);
  }

  void reset() { analyzed_ = false; }

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>>
      solver_;
  bool analyzed_ = false;
  Inertia inertia_;
};

}  // namespace gasflow
