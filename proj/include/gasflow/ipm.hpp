#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gasflow/kkt.hpp"
#include "gasflow/nlp.hpp"

namespace gasflow {

struct IpmOptions {
  double tol = 1e-6;
  int max_iter = 3000;
  double mu_init = 0.1;
  double tau_min = 0.995;      // fraction-to-boundary floor
  double kappa_eps = 10.0;     // barrier subproblem tolerance factor
  double kappa_mu = 0.2;       // linear mu decrease
  double theta_mu = 1.5;       // superlinear mu decrease
  double kappa_sigma = 1e10;   // dual clipping window
  double bound_push = 0.01;    // relative interior push at the start
  double delta_w0 = 1e-4;      // first primal regularization
  double delta_w_growth = 8.0;
  double delta_w_max = 1e40;
  double step_cap_factor = 1e3;  // |dz| ceiling relative to 1 + |z|
  double delta_c = 1e-8;       // dual regularization
  double scale_max = 100.0;    // gradient scaling cap
  int max_backtracks = 40;
  double bound_relax = 1e-8;   // one-time relative widening of the box
  double watchdog_trigger = 1e-2;  // accepted alpha below this arms the watchdog
  int watchdog_budget = 12;    // relaxed steps granted per probation
  int watchdog_cooldown = 5;   // strict iterations required after a revert
  bool scale_problem = true;
  std::function<void(const std::string&)> log;
};

enum class IpmStatus { Converged, IterationLimit, FactorizationFailure };

inline const char* to_string(IpmStatus s) {
  switch (s) {
    case IpmStatus::Converged:
      return "converged";
    case IpmStatus::IterationLimit:
      return "iteration_limit";
    case IpmStatus::FactorizationFailure:
      return "factorization_failure";
  }
  return "unknown";
}

struct IpmResult {
  IpmStatus status = IpmStatus::IterationLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd y_eq;    // multipliers of the equality constraints
  Eigen::VectorXd y_ineq;  // multipliers of the inequality rows
  Eigen::VectorXd slack;   // inequality slack values
  double objective = 0.0;
  double kkt_error = 0.0;
  double constraint_violation = 0.0;
  double mu = 0.0;
  int iterations = 0;
};

// Primal-dual interior-point solver with a monotone barrier schedule.
// Inequalities receive slacks; every finite bound contributes a logarithmic
// barrier term. Steps come from one LDL^T solve of the regularized KKT
// system; the primal regularization grows geometrically until the inertia is
// correct. Globalization is a backtracking line search on an l1 exact
// penalty, with a second-order correction against the cached factorization
// and a watchdog that probes unchecked fraction-to-boundary steps from a
// checkpoint whenever the merit search degenerates into a crawl. There is no
// restoration phase: problems whose constraints are locally infeasible stop
// at the iteration limit instead.
class IpmSolver {
 public:
  explicit IpmSolver(const SparseNlp& nlp, IpmOptions opts = {})
      : nlp_(nlp), o_(opts) {}

  IpmResult solve() {
    Eigen::VectorXd x0;
    nlp_.initial_point(x0);
    return solve(x0);
  }

  IpmResult solve(const Eigen::VectorXd& x_start) {
    setup(x_start);
    IpmResult res;
    double mu = o_.mu_init;
    const double mu_target = o_.tol / 11.0;
    double tau = std::max(o_.tau_min, 1.0 - mu);
    double nu = 1e-6;  // penalty weight, raised as needed
    double delta_w_last = 0.0;

    Eigen::VectorXd ce, ci, grad;
    std::vector<Triplet> jet, jit, ht;
    KktSolver kkt;

    int iter = 0;
    for (; iter < o_.max_iter; ++iter) {
      const double f = sf_ * nlp_.objective(x_);
      nlp_.gradient(x_, grad);
      nlp_.constraints(x_, ce, ci);
      nlp_.jacobians(x_, jet, jit);
      for (int r = 0; r < me_; ++r) ce[r] *= se_[r];

      mu_cur_ = mu;

      // residual of the stationarity condition in the scaled problem
      Eigen::VectorXd rd = Eigen::VectorXd::Zero(nz_);
      for (int i = 0; i < nf_; ++i) rd[i] = sf_ * grad[free_x_[i]];
      for (const auto& t : jet) {
        int zc = zcol_x_[t.col()];
        if (zc >= 0) rd[zc] += se_[t.row()] * t.value() * y_[t.row()];
      }
      for (const auto& t : jit) {
        int zc = zcol_x_[t.col()];
        if (zc >= 0) rd[zc] += t.value() * y_[me_ + t.row()];
      }
      for (int r = 0; r < mi_; ++r) {
        int zc = zcol_s_[r];
        if (zc >= 0) rd[zc] -= y_[me_ + r];
      }
      for (int i = 0; i < nz_; ++i) {
        if (has_lo_[i]) rd[i] -= zl_[i];
        if (has_hi_[i]) rd[i] += zu_[i];
      }

      Eigen::VectorXd rp(me_ + mi_);
      for (int r = 0; r < me_; ++r) rp[r] = ce[r];
      for (int r = 0; r < mi_; ++r) {
        rp[me_ + r] = ci[r] - s_full_[r];
      }

      // scaled optimality error, for mu = 0 and for the current barrier
      double ynorm1 = (me_ + mi_) ? y_.lpNorm<1>() : 0.0, znorm1 = 0.0;
      int nb = 0;
      for (int i = 0; i < nz_; ++i) {
        if (has_lo_[i]) {
          znorm1 += std::abs(zl_[i]);
          ++nb;
        }
        if (has_hi_[i]) {
          znorm1 += std::abs(zu_[i]);
          ++nb;
        }
      }
      double sd = std::max(o_.scale_max,
                           (ynorm1 + znorm1) / std::max(1, me_ + mi_ + nb)) /
                  o_.scale_max;
      double sc =
          std::max(o_.scale_max, znorm1 / std::max(1, nb)) / o_.scale_max;
      auto comp_error = [&](double mu_ref) {
        double e = 0.0;
        for (int i = 0; i < nz_; ++i) {
          if (has_lo_[i]) {
            e = std::max(e, std::abs((z_[i] - lo_[i]) * zl_[i] - mu_ref));
          }
          if (has_hi_[i]) {
            e = std::max(e, std::abs((hi_[i] - z_[i]) * zu_[i] - mu_ref));
          }
        }
        return e;
      };
      double theta = rp.size() ? rp.lpNorm<Eigen::Infinity>() : 0.0;
      double rdinf = rd.size() ? rd.lpNorm<Eigen::Infinity>() : 0.0;
      double e0 = std::max({rdinf / sd, theta, comp_error(0.0) / sc});
      double emu = std::max({rdinf / sd, theta, comp_error(mu) / sc});
      last_e0_ = e0;
      if (o_.log) {
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "it %4d  f %+.8e  th %.2e  kkt %.2e  mu %.1e  a %.2e  "
                      "ad %.1e  dw %.1e  |d| %.1e  nu %.1e  |y| %.1e",
                      iter, f / sf_, theta, e0, mu, last_alpha_, last_ad_,
                      last_dw_, last_dz_, last_nu_,
                      y_.size() ? y_.lpNorm<Eigen::Infinity>() : 0.0);
        o_.log(buf);
      }
      if (e0 <= o_.tol) {
        res.status = IpmStatus::Converged;
        break;
      }
      // watchdog probation: the unchecked steps must halve the optimality
      // error within their budget, otherwise the run resumes from the
      // checkpoint as if nothing happened (plus a cooldown, doubled per
      // consecutive failure, so a hopeless region is not re-probed forever)
      if (wd_probation_) {
        if (std::isfinite(e0) && e0 <= 0.5 * wd_e0_) {
          wd_probation_ = false;
          wd_cooldown_next_ = o_.watchdog_cooldown;
          if (o_.log) {
            char buf[120];
            std::snprintf(buf, sizeof(buf), "    watchdog pass  kkt %.2e -> %.2e",
                          wd_e0_, e0);
            o_.log(buf);
          }
        } else if (!std::isfinite(e0) ||
                   (wd_budget_ <= 0 &&
                    !(wd_ext_left_ > 0 && e0 <= 0.67 * wd_prev_e0_))) {
          z_ = wd_z_;
          x_ = wd_x_;
          s_full_ = wd_s_;
          y_ = wd_y_;
          zl_ = wd_zl_;
          zu_ = wd_zu_;
          mu = wd_mu_;
          tau = std::max(o_.tau_min, 1.0 - mu);
          wd_probation_ = false;
          wd_cooldown_ = wd_cooldown_next_;
          wd_cooldown_next_ = std::min(2 * wd_cooldown_next_, 100);
          last_alpha_ = 0.0;
          if (o_.log) o_.log("    watchdog revert");
          continue;
        } else if (wd_budget_ <= 0) {
          // error still falling fast at budget exhaustion: the probe is mid
          // traversal, so extend rather than discard the progress
          wd_budget_ = 4;
          --wd_ext_left_;
        }
        wd_prev_e0_ = e0;
      }
      while (emu <= o_.kappa_eps * mu && mu > mu_target) {
        mu = std::max(mu_target,
                      std::min(o_.kappa_mu * mu, std::pow(mu, o_.theta_mu)));
        tau = std::max(o_.tau_min, 1.0 - mu);
        emu = std::max({rdinf / sd, theta, comp_error(mu) / sc});
      }
      mu_cur_ = mu;

      // Hessian of the scaled Lagrangian
      Eigen::VectorXd ye_nlp(me_), yi_nlp(mi_);
      for (int r = 0; r < me_; ++r) ye_nlp[r] = se_[r] * y_[r];
      for (int r = 0; r < mi_; ++r) yi_nlp[r] = y_[me_ + r];
      nlp_.lagrangian_hessian(x_, sf_, ye_nlp, yi_nlp, ht);

      // KKT assembly; pattern is fixed, values change with the iterate.
      const int dim = nz_ + me_ + mi_;
      kkt_triplets_.clear();
      for (const auto& t : ht) {
        int zr = zcol_x_[t.row()], zc = zcol_x_[t.col()];
        if (zr >= 0 && zc >= 0) kkt_triplets_.emplace_back(zr, zc, t.value());
      }
      for (const auto& t : jet) {
        int zc = zcol_x_[t.col()];
        if (zc >= 0) {
          kkt_triplets_.emplace_back(nz_ + t.row(), zc,
                                     se_[t.row()] * t.value());
        }
      }
      for (const auto& t : jit) {
        int zc = zcol_x_[t.col()];
        if (zc >= 0) {
          kkt_triplets_.emplace_back(nz_ + me_ + t.row(), zc, t.value());
        }
      }
      for (int r = 0; r < mi_; ++r) {
        int zc = zcol_s_[r];
        if (zc >= 0) kkt_triplets_.emplace_back(nz_ + me_ + r, zc, -1.0);
      }
      const size_t head = kkt_triplets_.size();

      // barrier diagonal
      Eigen::VectorXd sigma = Eigen::VectorXd::Zero(nz_);
      for (int i = 0; i < nz_; ++i) {
        if (has_lo_[i]) sigma[i] += zl_[i] / (z_[i] - lo_[i]);
        if (has_hi_[i]) sigma[i] += zu_[i] / (hi_[i] - z_[i]);
      }

      Eigen::VectorXd rhs(dim);
      for (int i = 0; i < nz_; ++i) {
        double v = rd[i];
        // replace -zl/+zu by the mu-perturbed complementarity elimination
        if (has_lo_[i]) v += zl_[i] - mu / (z_[i] - lo_[i]);
        if (has_hi_[i]) v += -zu_[i] + mu / (hi_[i] - z_[i]);
        rhs[i] = -v;
      }
      for (int r = 0; r < me_ + mi_; ++r) rhs[nz_ + r] = -rp[r];

      // correct inertia alone does not rule out a nearly singular reduced
      // Hessian, whose Newton step is astronomically long and useless to any
      // line search, so an oversized step escalates delta_w exactly like an
      // inertia failure (Levenberg-Marquardt style damping)
      double step_cap =
          o_.step_cap_factor *
          (1.0 + (nz_ ? z_.lpNorm<Eigen::Infinity>() : 0.0));
      double delta_w = 0.0;
      bool factorized = false;
      Eigen::VectorXd step(dim);
      for (int attempt = 0; attempt < 60; ++attempt) {
        kkt_triplets_.resize(head);
        for (int i = 0; i < nz_; ++i) {
          kkt_triplets_.emplace_back(i, i, sigma[i] + delta_w);
        }
        double dc = std::max(o_.delta_c, o_.delta_c * std::sqrt(mu));
        for (int r = 0; r < me_ + mi_; ++r) {
          kkt_triplets_.emplace_back(nz_ + r, nz_ + r, -dc);
        }
        Eigen::SparseMatrix<double> A(dim, dim);
        A.setFromTriplets(kkt_triplets_.begin(), kkt_triplets_.end());
        bool ok = kkt.factorize(A);
        bool fact_ok = ok;
        if (ok) {
          const Inertia& in = kkt.inertia();
          ok = in.positive == nz_ && in.zero == 0;
        }
        bool inertia_ok = ok;
        double dznorm = 0.0;
        if (ok) {
          step = kkt.solve(rhs);
          dznorm = nz_ ? step.head(nz_).lpNorm<Eigen::Infinity>() : 0.0;
          ok = std::isfinite(dznorm) && dznorm <= step_cap;
        }
        if (o_.log && !ok) {
          char buf[200];
          std::snprintf(buf, sizeof(buf),
                        "    attempt %d dw %.2e fact %d inertia %d (%d,%d,%d) "
                        "|dz| %.2e cap %.2e",
                        attempt, delta_w, (int)fact_ok, (int)inertia_ok,
                        kkt.inertia().positive, kkt.inertia().negative,
                        kkt.inertia().zero, dznorm, step_cap);
          o_.log(buf);
        }
        if (ok) {
          factorized = true;
          if (delta_w > 0.0) delta_w_last = delta_w;
          break;
        }
        if (delta_w == 0.0) {
          delta_w = delta_w_last == 0.0
                        ? o_.delta_w0
                        : std::max(1e-20, delta_w_last / 3.0);
        } else {
          delta_w *= o_.delta_w_growth;
        }
        if (delta_w > o_.delta_w_max) break;
      }
      if (!factorized) {
        if (wd_probation_) {
          z_ = wd_z_;
          x_ = wd_x_;
          s_full_ = wd_s_;
          y_ = wd_y_;
          zl_ = wd_zl_;
          zu_ = wd_zu_;
          mu = wd_mu_;
          tau = std::max(o_.tau_min, 1.0 - mu);
          wd_probation_ = false;
          wd_cooldown_ = wd_cooldown_next_;
          wd_cooldown_next_ = std::min(2 * wd_cooldown_next_, 1000);
          if (o_.log) o_.log("    watchdog revert (factorization)");
          continue;
        }
        res.status = IpmStatus::FactorizationFailure;
        break;
      }

      Eigen::VectorXd dz = step.head(nz_);
      Eigen::VectorXd dy = step.tail(me_ + mi_);

      Eigen::VectorXd dzl = Eigen::VectorXd::Zero(nz_);
      Eigen::VectorXd dzu = Eigen::VectorXd::Zero(nz_);
      for (int i = 0; i < nz_; ++i) {
        if (has_lo_[i]) {
          dzl[i] =
              mu / (z_[i] - lo_[i]) - zl_[i] - zl_[i] / (z_[i] - lo_[i]) * dz[i];
        }
        if (has_hi_[i]) {
          dzu[i] =
              mu / (hi_[i] - z_[i]) - zu_[i] + zu_[i] / (hi_[i] - z_[i]) * dz[i];
        }
      }

      double alpha_p = 1.0, alpha_d = 1.0;
      for (int i = 0; i < nz_; ++i) {
        if (has_lo_[i]) {
          if (dz[i] < 0) {
            alpha_p = std::min(alpha_p, -tau * (z_[i] - lo_[i]) / dz[i]);
          }
          if (dzl[i] < 0) alpha_d = std::min(alpha_d, -tau * zl_[i] / dzl[i]);
        }
        if (has_hi_[i]) {
          if (dz[i] > 0) {
            alpha_p = std::min(alpha_p, tau * (hi_[i] - z_[i]) / dz[i]);
          }
          if (dzu[i] < 0) alpha_d = std::min(alpha_d, -tau * zu_[i] / dzu[i]);
        }
      }

      // l1 merit line search
      double cnorm1 = rp.lpNorm<1>();
      double dphi = 0.0;
      for (int i = 0; i < nf_; ++i) dphi += sf_ * grad[free_x_[i]] * dz[i];
      for (int i = 0; i < nz_; ++i) {
        if (has_lo_[i]) dphi -= mu / (z_[i] - lo_[i]) * dz[i];
        if (has_hi_[i]) dphi += mu / (hi_[i] - z_[i]) * dz[i];
      }
      // fresh penalty weight per direction; a monotone weight would let one
      // early bad step freeze all later tangential progress.  The weight
      // only needs to exceed the multipliers, plus enough to keep an ascent
      // direction (dphi > 0, pure feasibility restoration) a merit descent
      double nu_dual = 0.0;
      for (int r = 0; r < me_ + mi_; ++r) {
        nu_dual = std::max(nu_dual, std::abs(y_[r] + dy[r]));
      }
      nu = nu_dual + 1.0;
      if (cnorm1 > 1e-14 && dphi > 0.0) {
        nu = std::max(nu, dphi / (0.5 * cnorm1) + 1.0);
      }
      nu = std::min(nu, 1e12);
      double merit0 = f + barrier() + nu * cnorm1;
      double descent = dphi - nu * cnorm1;

      Eigen::VectorXd x_trial = x_, s_trial = s_full_, z_trial = z_;
      double c1_trial = 0.0, fb_trial = 0.0;
      auto trial_merit = [&](const Eigen::VectorXd& zt) {
        for (int i = 0; i < nf_; ++i) x_trial[free_x_[i]] = zt[i];
        for (int r = 0; r < mi_; ++r) {
          if (zcol_s_[r] >= 0) s_trial[r] = zt[zcol_s_[r]];
        }
        double f_t = sf_ * nlp_.objective(x_trial);
        nlp_.constraints(x_trial, ce, ci);
        c1_trial = 0.0;
        for (int r = 0; r < me_; ++r) c1_trial += std::abs(se_[r] * ce[r]);
        for (int r = 0; r < mi_; ++r)
          c1_trial += std::abs(ci[r] - s_trial[r]);
        fb_trial = f_t + barrier_at(zt);
        return fb_trial + nu * c1_trial;
      };

      double alpha = alpha_p;
      bool accepted = false;
      if (wd_probation_) {
        // probation step: fraction-to-boundary only, no merit test
        z_trial = z_ + alpha * dz;
        --wd_budget_;
        accepted = true;
      }
      for (int bt = 0; !accepted && bt < o_.max_backtracks; ++bt) {
        z_trial = z_ + alpha * dz;
        double merit = trial_merit(z_trial);
        if (std::isfinite(merit) &&
            merit <= merit0 + 1e-4 * alpha * descent) {
          accepted = true;
          break;
        }
        // second-order correction on the first rejection: a full Newton
        // step re-introduces O(alpha^2) constraint violation that the l1
        // penalty charges immediately, capping alpha near zero (Maratos);
        // a correction solve against the cached factorization removes it
        if (bt == 0) {
          double theta_soc = c1_trial;
          Eigen::VectorXd z_soc = z_trial;
          bool soc_ok = false;
          for (int p = 0; p < 4; ++p) {
            Eigen::VectorXd rhs_soc = Eigen::VectorXd::Zero(dim);
            for (int r = 0; r < me_; ++r) {
              rhs_soc[nz_ + r] = -se_[r] * ce[r];
            }
            for (int r = 0; r < mi_; ++r) {
              rhs_soc[nz_ + me_ + r] = -(ci[r] - s_trial[r]);
            }
            Eigen::VectorXd cor = kkt.solve(rhs_soc).head(nz_);
            double beta = 1.0;
            for (int i = 0; i < nz_; ++i) {
              if (has_lo_[i] && cor[i] < 0) {
                beta = std::min(beta, -tau * (z_soc[i] - lo_[i]) / cor[i]);
              }
              if (has_hi_[i] && cor[i] > 0) {
                beta = std::min(beta, tau * (hi_[i] - z_soc[i]) / cor[i]);
              }
            }
            z_soc += beta * cor;
            double merit_soc = trial_merit(z_soc);
            if (std::isfinite(merit_soc) &&
                merit_soc <= merit0 + 1e-4 * alpha * descent) {
              soc_ok = true;
              break;
            }
            if (!(c1_trial < 0.99 * theta_soc)) break;
            theta_soc = c1_trial;
          }
          if (soc_ok) {
            z_trial = z_soc;
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!wd_probation_) {
        // arm the watchdog when the merit search crawls: the l1 penalty can
        // pin alpha near zero along a curved constraint manifold (Maratos
        // effect beyond the reach of one correction), while the unchecked
        // Newton iteration tracks that manifold fine.  The checkpoint makes
        // the experiment free apart from the wasted iterations.
        double alpha_used = accepted ? alpha : 1e-10;
        if (alpha_used < o_.watchdog_trigger && wd_cooldown_ == 0 &&
            alpha_p > 10.0 * alpha_used) {
          wd_z_ = z_;
          wd_x_ = x_;
          wd_s_ = s_full_;
          wd_y_ = y_;
          wd_zl_ = zl_;
          wd_zu_ = zu_;
          wd_mu_ = mu;
          wd_e0_ = e0;
          wd_prev_e0_ = e0;
          wd_ext_left_ = 3;
          wd_probation_ = true;
          wd_budget_ = o_.watchdog_budget - 1;
          alpha = alpha_p;
          z_trial = z_ + alpha * dz;
          accepted = true;
          if (o_.log) {
            char buf[120];
            std::snprintf(buf, sizeof(buf),
                          "    watchdog engage  a %.1e -> %.1e", alpha_used,
                          alpha_p);
            o_.log(buf);
          }
        } else if (!accepted) {
          alpha = std::min(alpha, 1e-10);
          z_trial = z_ + alpha * dz;
        }
        if (wd_cooldown_ > 0) --wd_cooldown_;
      }
      last_alpha_ = alpha;
      last_ad_ = alpha_d;
      last_nu_ = nu;
      last_dw_ = delta_w;
      last_dz_ = dz.size() ? dz.lpNorm<Eigen::Infinity>() : 0.0;

      z_ = z_trial;
      for (int i = 0; i < nf_; ++i) x_[free_x_[i]] = z_[i];
      for (int r = 0; r < mi_; ++r) {
        if (zcol_s_[r] >= 0) s_full_[r] = z_[zcol_s_[r]];
      }
      // with tau = 1 - mu, a run of full steps contracts a bound gap by mu
      // per iteration; once the gap reaches rounding level the barrier
      // diagonal overflows and the factorization dies on infinities.  Nudge
      // the bound outward instead (invisible at solution accuracy), exactly
      // so the gap stays representable.
      for (int i = 0; i < nz_; ++i) {
        double scale = std::max(1.0, std::abs(z_[i]));
        if (has_lo_[i] && z_[i] - lo_[i] < 1e-14 * scale) {
          lo_[i] -= 1e-11 * std::max(1.0, std::abs(lo_[i]));
        }
        if (has_hi_[i] && hi_[i] - z_[i] < 1e-14 * scale) {
          hi_[i] += 1e-11 * std::max(1.0, std::abs(hi_[i]));
        }
      }
      // advance y with the dual step length, not the (possibly chopped)
      // primal alpha: a rejected long primal step must still let the
      // multipliers move, otherwise an indefinite y*H block never becomes
      // convex and every subsequent direction stays long
      double alpha_y = alpha_d;
      double dy_norm = dy.size() ? dy.lpNorm<Eigen::Infinity>() : 0.0;
      double y_cap = 1e4 * (1.0 + (y_.size() ? y_.lpNorm<Eigen::Infinity>() : 0.0));
      if (alpha_y * dy_norm > y_cap) alpha_y = y_cap / dy_norm;
      y_ += alpha_y * dy;
      for (int i = 0; i < nz_; ++i) {
        if (has_lo_[i]) {
          zl_[i] += alpha_d * dzl[i];
          double g = z_[i] - lo_[i];
          zl_[i] = std::min(std::max(zl_[i], mu / (o_.kappa_sigma * g)),
                            o_.kappa_sigma * mu / g);
        }
        if (has_hi_[i]) {
          zu_[i] += alpha_d * dzu[i];
          double g = hi_[i] - z_[i];
          zu_[i] = std::min(std::max(zu_[i], mu / (o_.kappa_sigma * g)),
                            o_.kappa_sigma * mu / g);
        }
      }
    }

    res.iterations = iter;
    res.mu = mu;
    res.x = x_;
    res.slack = s_full_;
    res.objective = nlp_.objective(x_);
    res.y_eq.resize(me_);
    res.y_ineq.resize(mi_);
    for (int r = 0; r < me_; ++r) res.y_eq[r] = se_[r] * y_[r] / sf_;
    for (int r = 0; r < mi_; ++r) res.y_ineq[r] = y_[me_ + r] / sf_;
    {
      Eigen::VectorXd ce2, ci2;
      nlp_.constraints(x_, ce2, ci2);
      double viol = ce2.size() ? ce2.lpNorm<Eigen::Infinity>() : 0.0;
      for (int r = 0; r < mi_; ++r) {
        viol = std::max(viol, std::max(cl_[r] - ci2[r], ci2[r] - cu_[r]));
      }
      res.constraint_violation = std::max(viol, 0.0);
      res.kkt_error = last_e0_;
    }
    return res;
  }

 private:
  void setup(const Eigen::VectorXd& x_start) {
    n_ = nlp_.num_vars();
    me_ = nlp_.num_eq();
    mi_ = nlp_.num_ineq();
    nlp_.bounds(xl_, xu_);
    nlp_.ineq_bounds(cl_, cu_);

    free_x_.clear();
    zcol_x_.assign(n_, -1);
    for (int i = 0; i < n_; ++i) {
      if (xl_[i] < xu_[i]) {
        zcol_x_[i] = static_cast<int>(free_x_.size());
        free_x_.push_back(i);
      }
    }
    nf_ = static_cast<int>(free_x_.size());

    x_ = x_start;
    for (int i = 0; i < n_; ++i) {
      if (zcol_x_[i] < 0) x_[i] = xl_[i];
    }

    // objective and equality-row scaling from the starting point
    Eigen::VectorXd grad;
    nlp_.gradient(x_, grad);
    sf_ = 1.0;
    se_.assign(me_, 1.0);
    if (o_.scale_problem) {
      double gmax = 0.0;
      for (int i : free_x_) gmax = std::max(gmax, std::abs(grad[i]));
      if (gmax > o_.scale_max) sf_ = o_.scale_max / gmax;
      std::vector<Triplet> jet, jit;
      nlp_.jacobians(x_, jet, jit);
      std::vector<double> rn(me_, 0.0);
      for (const auto& t : jet) {
        if (zcol_x_[t.col()] >= 0) {
          rn[t.row()] = std::max(rn[t.row()], std::abs(t.value()));
        }
      }
      for (int r = 0; r < me_; ++r) {
        if (rn[r] > o_.scale_max) se_[r] = o_.scale_max / rn[r];
      }
    }

    // slacks at the (clipped) inequality values
    Eigen::VectorXd ce, ci;
    nlp_.constraints(x_, ce, ci);
    s_full_ = ci;

    zcol_s_.assign(mi_, -1);
    int zi = nf_;
    for (int r = 0; r < mi_; ++r) {
      if (cl_[r] < cu_[r]) {
        zcol_s_[r] = zi++;
      } else {
        s_full_[r] = cl_[r];
      }
    }
    nz_ = zi;

    z_.resize(nz_);
    lo_.resize(nz_);
    hi_.resize(nz_);
    has_lo_.assign(nz_, false);
    has_hi_.assign(nz_, false);
    for (int i = 0; i < nf_; ++i) {
      z_[i] = x_[free_x_[i]];
      lo_[i] = xl_[free_x_[i]];
      hi_[i] = xu_[free_x_[i]];
    }
    for (int r = 0; r < mi_; ++r) {
      if (zcol_s_[r] >= 0) {
        z_[zcol_s_[r]] = s_full_[r];
        lo_[zcol_s_[r]] = cl_[r];
        hi_[zcol_s_[r]] = cu_[r];
      }
    }
    for (int i = 0; i < nz_; ++i) {
      has_lo_[i] = std::isfinite(lo_[i]);
      has_hi_[i] = std::isfinite(hi_[i]);
      // widen the box a whisker so a solution sitting exactly on a stated
      // bound is still interior; active bounds then cost the barrier a
      // bounded amount instead of driving gaps to the rounding floor
      if (has_lo_[i]) lo_[i] -= o_.bound_relax * std::max(1.0, std::abs(lo_[i]));
      if (has_hi_[i]) hi_[i] += o_.bound_relax * std::max(1.0, std::abs(hi_[i]));
      if (has_lo_[i] && has_hi_[i]) {
        double w = hi_[i] - lo_[i];
        double pl = std::min(o_.bound_push * std::max(1.0, std::abs(lo_[i])),
                             0.25 * w);
        double pu = std::min(o_.bound_push * std::max(1.0, std::abs(hi_[i])),
                             0.25 * w);
        z_[i] = std::min(std::max(z_[i], lo_[i] + pl), hi_[i] - pu);
      } else if (has_lo_[i]) {
        z_[i] = std::max(z_[i],
                         lo_[i] + o_.bound_push * std::max(1.0, std::abs(lo_[i])));
      } else if (has_hi_[i]) {
        z_[i] = std::min(z_[i],
                         hi_[i] - o_.bound_push * std::max(1.0, std::abs(hi_[i])));
      }
    }
    for (int i = 0; i < nf_; ++i) x_[free_x_[i]] = z_[i];
    for (int r = 0; r < mi_; ++r) {
      if (zcol_s_[r] >= 0) s_full_[r] = z_[zcol_s_[r]];
    }

    wd_probation_ = false;
    wd_budget_ = 0;
    wd_cooldown_ = 0;
    wd_cooldown_next_ = o_.watchdog_cooldown;

    y_ = Eigen::VectorXd::Zero(me_ + mi_);
    zl_ = Eigen::VectorXd::Zero(nz_);
    zu_ = Eigen::VectorXd::Zero(nz_);
    for (int i = 0; i < nz_; ++i) {
      if (has_lo_[i]) zl_[i] = std::max(1e-8, o_.mu_init / (z_[i] - lo_[i]));
      if (has_hi_[i]) zu_[i] = std::max(1e-8, o_.mu_init / (hi_[i] - z_[i]));
    }
    init_multipliers();
  }

  // Least-squares estimate of the constraint multipliers at the start:
  // solve [I J^T; J -dI] [w; y] = [-(grad f - zl + zu); 0] and keep y unless
  // it comes out implausibly large.
  void init_multipliers() {
    if (me_ + mi_ == 0 || nz_ == 0) return;
    Eigen::VectorXd grad;
    nlp_.gradient(x_, grad);
    std::vector<Triplet> jet, jit, ts;
    nlp_.jacobians(x_, jet, jit);
    const int dim = nz_ + me_ + mi_;
    for (int i = 0; i < nz_; ++i) ts.emplace_back(i, i, 1.0);
    for (const auto& t : jet) {
      int zc = zcol_x_[t.col()];
      if (zc >= 0) ts.emplace_back(nz_ + t.row(), zc, se_[t.row()] * t.value());
    }
    for (const auto& t : jit) {
      int zc = zcol_x_[t.col()];
      if (zc >= 0) ts.emplace_back(nz_ + me_ + t.row(), zc, t.value());
    }
    for (int r = 0; r < mi_; ++r) {
      int zc = zcol_s_[r];
      if (zc >= 0) ts.emplace_back(nz_ + me_ + r, zc, -1.0);
    }
    for (int r = 0; r < me_ + mi_; ++r) {
      ts.emplace_back(nz_ + r, nz_ + r, -1e-8);
    }
    Eigen::SparseMatrix<double> A(dim, dim);
    A.setFromTriplets(ts.begin(), ts.end());
    KktSolver ls;
    if (!ls.factorize(A)) return;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < nf_; ++i) rhs[i] = -sf_ * grad[free_x_[i]];
    for (int i = 0; i < nz_; ++i) {
      if (has_lo_[i]) rhs[i] += zl_[i];
      if (has_hi_[i]) rhs[i] -= zu_[i];
    }
    Eigen::VectorXd sol = ls.solve(rhs);
    Eigen::VectorXd y = sol.tail(me_ + mi_);
    if (y.lpNorm<Eigen::Infinity>() <= 1e3) y_ = y;
  }

  double barrier() const { return barrier_at(z_); }
  double barrier_at(const Eigen::VectorXd& z) const {
    double b = 0.0;
    for (int i = 0; i < nz_; ++i) {
      if (has_lo_[i]) {
        double g = z[i] - lo_[i];
        if (g <= 0) return std::numeric_limits<double>::infinity();
        b -= std::log(g);
      }
      if (has_hi_[i]) {
        double g = hi_[i] - z[i];
        if (g <= 0) return std::numeric_limits<double>::infinity();
        b -= std::log(g);
      }
    }
    return mu_cur_ * b;
  }

  const SparseNlp& nlp_;
  IpmOptions o_;
  int n_ = 0, me_ = 0, mi_ = 0, nf_ = 0, nz_ = 0;
  Eigen::VectorXd xl_, xu_, cl_, cu_;
  std::vector<int> free_x_, zcol_x_, zcol_s_;
  Eigen::VectorXd x_, s_full_, z_, lo_, hi_, y_, zl_, zu_;
  std::vector<bool> has_lo_, has_hi_;
  double sf_ = 1.0;
  std::vector<double> se_;
  double mu_cur_ = 0.0;
  double last_e0_ = 0.0;
  double last_alpha_ = 0.0, last_dw_ = 0.0, last_dz_ = 0.0, last_nu_ = 0.0,
      last_ad_ = 0.0;
  bool wd_probation_ = false;
  int wd_budget_ = 0, wd_cooldown_ = 0, wd_cooldown_next_ = 0, wd_ext_left_ = 0;
  double wd_mu_ = 0.0, wd_e0_ = 0.0, wd_prev_e0_ = 0.0;
  Eigen::VectorXd wd_z_, wd_x_, wd_s_, wd_y_, wd_zl_, wd_zu_;
  std::vector<Triplet> kkt_triplets_;
};

}  // namespace gasflow
