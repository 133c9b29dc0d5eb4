#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasflow/augmented.hpp"
#include "gasflow/nlp.hpp"
#include "gasflow/physics.hpp"
#include "gasflow/units.hpp"

namespace gasflow {

struct TranscriptionOptions {
  double dt_hours = 1.0;
  double kappa = 0.95;      // profit weight; 1-kappa weights compressor energy
  double smoothing = 1e-4;  // dimensionless flux smoothing in phi|phi|
};

// Periodic collocation of the network optimal control problem on N = T/dt
// uniformly spaced time nodes. States use backward differences in time with
// index 0 wrapping to N-1, which enforces time periodicity of every state
// except the reservoir densities; those instead carry a fixed initial value
// and N-1 forward-marching interval equations.
//
// Variable layout is time-major. Within a node:
//   densities (one per segmented junction),
//   phi+ phi- phi_in phi_out (per segmented pipe),
//   alpha flow work (per compressor),
//   transfer flow (per receipt/delivery),
//   alpha_s rho_res f_bh f_wh f_s (per storage).
// All quantities are dimensionless; transfer series are converted from kg/s
// using the mass-flow scale, prices to $ per dimensionless-flow-hour.
class TranscribedNlp : public SparseNlp {
 public:
  explicit TranscribedNlp(const AugmentedNetwork& aug,
                          TranscriptionOptions opts = {})
      : aug_(aug), opts_(opts) {
    const double T = aug.horizon_hours;
    N_ = static_cast<int>(std::lround(T / opts.dt_hours));
    if (N_ < 2 || std::abs(N_ * opts.dt_hours - T) > 1e-9 * (1.0 + T)) {
      throw std::invalid_argument(
          "transcription: dt must divide the horizon into at least two steps");
    }
    dt_nd_ = opts.dt_hours * units::kSecondsPerHour / aug.scales.time0();

    V_ = static_cast<int>(aug.junctions.size());
    P_ = static_cast<int>(aug.pipes.size());
    C_ = static_cast<int>(aug.compressors.size());
    T_ = static_cast<int>(aug.transfers.size());
    S_ = static_cast<int>(aug.storages.size());
    for (int c = 0; c < C_; ++c) {
      if (aug.compressors[c].type == CompressorType::BidirectionalReverse) {
        type2_.push_back(c);
      }
    }
    C2_ = static_cast<int>(type2_.size());

    stride_ = V_ + 4 * P_ + 3 * C_ + T_ + 5 * S_;
    me_node_ = V_ + 4 * P_ + 2 * C_ + 3 * S_;
    mi_node_ = C_ + C2_;

    const double mf0 = aug.scales.mass_flow0();
    const double mw = aug.scales.a2() * mf0 / 1.0e6;  // unit W*f in MW
    raw_energy_ = mw * opts.dt_hours;
    energy_coeff_ = (1.0 - opts.kappa) * raw_energy_;

    slack_rho_.resize(static_cast<size_t>(N_) * V_, 0.0);
    for (int k = 0; k < N_; ++k) {
      double t = k * opts.dt_hours;
      for (int j : aug.slack_junctions) {
        slack_rho_[static_cast<size_t>(k) * V_ + j] = aug.slack_density(j, t);
      }
    }
    transfer_lo_.resize(static_cast<size_t>(N_) * T_);
    transfer_hi_.resize(static_cast<size_t>(N_) * T_);
    raw_price_.resize(static_cast<size_t>(N_) * T_);
    price_coeff_.resize(static_cast<size_t>(N_) * T_);
    for (int k = 0; k < N_; ++k) {
      double t = k * opts.dt_hours;
      for (int tr = 0; tr < T_; ++tr) {
        const SegTransfer& tp = aug.transfers[tr];
        size_t at = static_cast<size_t>(k) * T_ + tr;
        transfer_lo_[at] = tp.min_flow.value(t) / mf0;
        transfer_hi_[at] = tp.max_flow.value(t) / mf0;
        raw_price_[at] = tp.price.value(t) * mf0 * opts.dt_hours;
        price_coeff_[at] = -opts.kappa * raw_price_[at];
      }
    }
  }

  const AugmentedNetwork& network() const { return aug_; }
  const TranscriptionOptions& options() const { return opts_; }
  int num_nodes() const { return N_; }
  double dt_hours() const { return opts_.dt_hours; }
  double dt_nd() const { return dt_nd_; }
  double node_hour(int k) const { return k * opts_.dt_hours; }
  int node_stride() const { return stride_; }

  int rho_index(int k, int j) const { return k * stride_ + j; }
  // which: 0 phi+, 1 phi-, 2 phi_in, 3 phi_out
  int pipe_var(int k, int p, int which) const {
    return k * stride_ + V_ + 4 * p + which;
  }
  // which: 0 alpha, 1 flow, 2 work
  int comp_var(int k, int c, int which) const {
    return k * stride_ + V_ + 4 * P_ + 3 * c + which;
  }
  int transfer_var(int k, int t) const {
    return k * stride_ + V_ + 4 * P_ + 3 * C_ + t;
  }
  // which: 0 alpha_s, 1 rho_res, 2 f_bh, 3 f_wh, 4 f_s
  int storage_var(int k, int s, int which) const {
    return k * stride_ + V_ + 4 * P_ + 3 * C_ + T_ + 5 * s + which;
  }

  int balance_row(int k, int j) const { return k * me_node_ + j; }
  int momentum_row(int k, int p) const { return k * me_node_ + V_ + p; }
  int mass_row(int k, int p) const { return k * me_node_ + V_ + P_ + p; }
  int phi_in_row(int k, int p) const { return k * me_node_ + V_ + 2 * P_ + p; }
  int phi_out_row(int k, int p) const { return k * me_node_ + V_ + 3 * P_ + p; }
  int ratio_row(int k, int c) const { return k * me_node_ + V_ + 4 * P_ + c; }
  int work_row(int k, int c) const { return k * me_node_ + V_ + 4 * P_ + C_ + c; }
  int bottomhole_row(int k, int s) const {
    return k * me_node_ + V_ + 4 * P_ + 2 * C_ + s;
  }
  int regulator_row(int k, int s) const {
    return k * me_node_ + V_ + 4 * P_ + 2 * C_ + S_ + s;
  }
  int surface_row(int k, int s) const {
    return k * me_node_ + V_ + 4 * P_ + 2 * C_ + 2 * S_ + s;
  }
  // k = 1..N-1
  int reservoir_row(int k, int s) const {
    return N_ * me_node_ + (k - 1) * S_ + s;
  }
  int power_row(int k, int c) const { return k * mi_node_ + c; }
  int direction_row(int k, int idx2) const { return k * mi_node_ + C_ + idx2; }

  double transfer_bound_lo(int k, int t) const {
    return transfer_lo_[static_cast<size_t>(k) * T_ + t];
  }
  double transfer_bound_hi(int k, int t) const {
    return transfer_hi_[static_cast<size_t>(k) * T_ + t];
  }

  int num_vars() const override { return N_ * stride_; }
  int num_eq() const override { return N_ * me_node_ + (N_ - 1) * S_; }
  int num_ineq() const override { return N_ * mi_node_; }

  void bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const override {
    lo.setConstant(num_vars(), -kInf);
    hi.setConstant(num_vars(), kInf);
    for (int k = 0; k < N_; ++k) {
      for (int j = 0; j < V_; ++j) {
        const SegJunction& sj = aug_.junctions[j];
        int at = rho_index(k, j);
        if (sj.slack) {
          lo[at] = hi[at] = slack_rho_[static_cast<size_t>(k) * V_ + j];
        } else {
          lo[at] = sj.rho_min;
          hi[at] = sj.rho_max;
        }
      }
      for (int p = 0; p < P_; ++p) {
        double fm = aug_.pipes[p].flux_max_nd;
        if (fm > 0) {
          for (int w = 0; w < 4; ++w) {
            lo[pipe_var(k, p, w)] = -fm;
            hi[pipe_var(k, p, w)] = fm;
          }
        }
      }
      for (int c = 0; c < C_; ++c) {
        const SegCompressor& sc = aug_.compressors[c];
        lo[comp_var(k, c, 0)] = 1.0;
        hi[comp_var(k, c, 0)] = sc.alpha_max;
        bool bidir = sc.type == CompressorType::BidirectionalReverse;
        lo[comp_var(k, c, 1)] = bidir ? -sc.flow_max_nd : 0.0;
        hi[comp_var(k, c, 1)] = sc.flow_max_nd;
        lo[comp_var(k, c, 2)] = 0.0;
        double wmax = aug_.work_coefficient_nd() *
                      (std::pow(sc.alpha_max, aug_.work_exponent()) - 1.0);
        hi[comp_var(k, c, 2)] = wmax;
      }
      for (int t = 0; t < T_; ++t) {
        size_t at = static_cast<size_t>(k) * T_ + t;
        lo[transfer_var(k, t)] = transfer_lo_[at];
        hi[transfer_var(k, t)] = transfer_hi_[at];
      }
      for (int s = 0; s < S_; ++s) {
        const SegStorage& st = aug_.storages[s];
        lo[storage_var(k, s, 0)] = st.alpha_s_min;
        hi[storage_var(k, s, 0)] = st.alpha_s_max;
        if (k == 0) {
          lo[storage_var(k, s, 1)] = st.rho_res_initial;
          hi[storage_var(k, s, 1)] = st.rho_res_initial;
        } else {
          lo[storage_var(k, s, 1)] = st.rho_res_min;
          hi[storage_var(k, s, 1)] = st.rho_res_max;
        }
        lo[storage_var(k, s, 2)] = -1.5 * st.flow_max_nd;
        hi[storage_var(k, s, 2)] = 1.5 * st.flow_max_nd;
        for (int w = 3; w < 5; ++w) {
          lo[storage_var(k, s, w)] = -st.flow_max_nd;
          hi[storage_var(k, s, w)] = st.flow_max_nd;
        }
      }
    }
  }

  void ineq_bounds(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const override {
    lo.setConstant(num_ineq(), -kInf);
    hi.resize(num_ineq());
    for (int k = 0; k < N_; ++k) {
      for (int c = 0; c < C_; ++c) {
        hi[power_row(k, c)] = aug_.compressors[c].power_max_nd;
      }
      for (int i = 0; i < C2_; ++i) hi[direction_row(k, i)] = 0.0;
    }
  }

  double objective(const Eigen::VectorXd& x) const override {
    double obj = 0.0;
    for (int k = 0; k < N_; ++k) {
      for (int t = 0; t < T_; ++t) {
        obj += price_coeff_[static_cast<size_t>(k) * T_ + t] * x[transfer_var(k, t)];
      }
      for (int c = 0; c < C_; ++c) {
        obj += energy_coeff_ * x[comp_var(k, c, 2)] * x[comp_var(k, c, 1)];
      }
    }
    return obj;
  }

  // Profit and energy parts in physical units ($ and MWh) for reporting.
  double profit_usd(const Eigen::VectorXd& x) const {
    double p = 0.0;
    for (int k = 0; k < N_; ++k) {
      for (int t = 0; t < T_; ++t) {
        p += raw_price_[static_cast<size_t>(k) * T_ + t] * x[transfer_var(k, t)];
      }
    }
    return p;
  }
  double energy_mwh(const Eigen::VectorXd& x) const {
    double e = 0.0;
    for (int k = 0; k < N_; ++k) {
      for (int c = 0; c < C_; ++c) {
        e += raw_energy_ * x[comp_var(k, c, 2)] * x[comp_var(k, c, 1)];
      }
    }
    return e;
  }

  void gradient(const Eigen::VectorXd& x, Eigen::VectorXd& g) const override {
    g.setZero(num_vars());
    for (int k = 0; k < N_; ++k) {
      for (int t = 0; t < T_; ++t) {
        g[transfer_var(k, t)] += price_coeff_[static_cast<size_t>(k) * T_ + t];
      }
      for (int c = 0; c < C_; ++c) {
        g[comp_var(k, c, 2)] += energy_coeff_ * x[comp_var(k, c, 1)];
        g[comp_var(k, c, 1)] += energy_coeff_ * x[comp_var(k, c, 2)];
      }
    }
  }

  void constraints(const Eigen::VectorXd& x, Eigen::VectorXd& ce,
                   Eigen::VectorXd& ci) const override {
    ce.setZero(num_eq());
    ci.setZero(num_ineq());
    const double wc = aug_.work_coefficient_nd();
    const double wm = aug_.work_exponent();
    for (int k = 0; k < N_; ++k) {
      int kp = (k + N_ - 1) % N_;
      for (int j = 0; j < V_; ++j) {
        double r = 0.0;
        for (const BalanceTerm& term : aug_.incidence[j]) {
          r += term.coeff * x[term_var(k, term)];
        }
        ce[balance_row(k, j)] = r;
      }
      for (int p = 0; p < P_; ++p) {
        const SegPipe& sp = aug_.pipes[p];
        auto m = physics::momentum(sp, x[rho_index(k, sp.from)],
                                   x[rho_index(k, sp.to)],
                                   x[pipe_var(k, p, 0)], opts_.smoothing);
        ce[momentum_row(k, p)] = m.r;
        double cm = sp.length_nd / dt_nd_;
        ce[mass_row(k, p)] =
            cm * (x[rho_index(k, sp.from)] - x[rho_index(kp, sp.from)] +
                  x[rho_index(k, sp.to)] - x[rho_index(kp, sp.to)]) +
            4.0 * x[pipe_var(k, p, 1)];
        ce[phi_in_row(k, p)] =
            x[pipe_var(k, p, 2)] - x[pipe_var(k, p, 0)] + x[pipe_var(k, p, 1)];
        ce[phi_out_row(k, p)] =
            x[pipe_var(k, p, 3)] - x[pipe_var(k, p, 0)] - x[pipe_var(k, p, 1)];
      }
      for (int c = 0; c < C_; ++c) {
        const SegCompressor& sc = aug_.compressors[c];
        double alpha = x[comp_var(k, c, 0)];
        // the boost relation is kept in log form: the product form's
        // bilinear (alpha, rho) cross-curvature makes the merit line
        // search crawl along the alpha*rho = const hyperbola, while in
        // logs that valley is a flat subspace
        ce[ratio_row(k, c)] = std::log(x[rho_index(k, sc.to)]) -
                              std::log(x[rho_index(k, sc.from)]) -
                              std::log(alpha);
        ce[work_row(k, c)] =
            x[comp_var(k, c, 2)] - wc * (std::pow(alpha, wm) - 1.0);
        ci[power_row(k, c)] = x[comp_var(k, c, 2)] * x[comp_var(k, c, 1)];
      }
      for (int i = 0; i < C2_; ++i) {
        int c = type2_[i];
        ci[direction_row(k, i)] =
            x[comp_var(k, c, 1)] * (1.0 - x[comp_var(k, c, 0)]);
      }
      for (int s = 0; s < S_; ++s) {
        const SegStorage& st = aug_.storages[s];
        ce[bottomhole_row(k, s)] =
            x[rho_index(k, st.bottomhole)] - x[storage_var(k, s, 1)];
        ce[regulator_row(k, s)] = std::log(x[rho_index(k, st.junction)]) -
                                  std::log(x[storage_var(k, s, 0)]) -
                                  std::log(x[rho_index(k, st.wellhead)]);
        ce[surface_row(k, s)] = x[storage_var(k, s, 4)] - x[storage_var(k, s, 3)];
        if (k >= 1) {
          ce[reservoir_row(k, s)] =
              st.volume_nd *
                  (x[storage_var(k, s, 1)] - x[storage_var(k - 1, s, 1)]) /
                  dt_nd_ -
              x[storage_var(k, s, 2)];
        }
      }
    }
  }

  void jacobians(const Eigen::VectorXd& x, std::vector<Triplet>& je,
                 std::vector<Triplet>& ji) const override {
    je.clear();
    ji.clear();
    const double wc = aug_.work_coefficient_nd();
    const double wm = aug_.work_exponent();
    for (int k = 0; k < N_; ++k) {
      int kp = (k + N_ - 1) % N_;
      for (int j = 0; j < V_; ++j) {
        int row = balance_row(k, j);
        for (const BalanceTerm& term : aug_.incidence[j]) {
          je.emplace_back(row, term_var(k, term), term.coeff);
        }
      }
      for (int p = 0; p < P_; ++p) {
        const SegPipe& sp = aug_.pipes[p];
        auto m = physics::momentum(sp, x[rho_index(k, sp.from)],
                                   x[rho_index(k, sp.to)],
                                   x[pipe_var(k, p, 0)], opts_.smoothing);
        int row = momentum_row(k, p);
        je.emplace_back(row, rho_index(k, sp.from), m.d_rho_i);
        je.emplace_back(row, rho_index(k, sp.to), m.d_rho_j);
        je.emplace_back(row, pipe_var(k, p, 0), m.d_phi);
        row = mass_row(k, p);
        double cm = sp.length_nd / dt_nd_;
        je.emplace_back(row, rho_index(k, sp.from), cm);
        je.emplace_back(row, rho_index(k, sp.to), cm);
        je.emplace_back(row, rho_index(kp, sp.from), -cm);
        je.emplace_back(row, rho_index(kp, sp.to), -cm);
        je.emplace_back(row, pipe_var(k, p, 1), 4.0);
        row = phi_in_row(k, p);
        je.emplace_back(row, pipe_var(k, p, 2), 1.0);
        je.emplace_back(row, pipe_var(k, p, 0), -1.0);
        je.emplace_back(row, pipe_var(k, p, 1), 1.0);
        row = phi_out_row(k, p);
        je.emplace_back(row, pipe_var(k, p, 3), 1.0);
        je.emplace_back(row, pipe_var(k, p, 0), -1.0);
        je.emplace_back(row, pipe_var(k, p, 1), -1.0);
      }
      for (int c = 0; c < C_; ++c) {
        const SegCompressor& sc = aug_.compressors[c];
        double alpha = x[comp_var(k, c, 0)];
        int row = ratio_row(k, c);
        je.emplace_back(row, rho_index(k, sc.to), 1.0 / x[rho_index(k, sc.to)]);
        je.emplace_back(row, rho_index(k, sc.from),
                        -1.0 / x[rho_index(k, sc.from)]);
        je.emplace_back(row, comp_var(k, c, 0), -1.0 / alpha);
        row = work_row(k, c);
        je.emplace_back(row, comp_var(k, c, 2), 1.0);
        je.emplace_back(row, comp_var(k, c, 0),
                        -wc * wm * std::pow(alpha, wm - 1.0));
        row = power_row(k, c);
        ji.emplace_back(row, comp_var(k, c, 2), x[comp_var(k, c, 1)]);
        ji.emplace_back(row, comp_var(k, c, 1), x[comp_var(k, c, 2)]);
      }
      for (int i = 0; i < C2_; ++i) {
        int c = type2_[i];
        int row = direction_row(k, i);
        ji.emplace_back(row, comp_var(k, c, 1), 1.0 - x[comp_var(k, c, 0)]);
        ji.emplace_back(row, comp_var(k, c, 0), -x[comp_var(k, c, 1)]);
      }
      for (int s = 0; s < S_; ++s) {
        const SegStorage& st = aug_.storages[s];
        int row = bottomhole_row(k, s);
        je.emplace_back(row, rho_index(k, st.bottomhole), 1.0);
        je.emplace_back(row, storage_var(k, s, 1), -1.0);
        row = regulator_row(k, s);
        je.emplace_back(row, rho_index(k, st.junction),
                        1.0 / x[rho_index(k, st.junction)]);
        je.emplace_back(row, rho_index(k, st.wellhead),
                        -1.0 / x[rho_index(k, st.wellhead)]);
        je.emplace_back(row, storage_var(k, s, 0),
                        -1.0 / x[storage_var(k, s, 0)]);
        row = surface_row(k, s);
        je.emplace_back(row, storage_var(k, s, 4), 1.0);
        je.emplace_back(row, storage_var(k, s, 3), -1.0);
        if (k >= 1) {
          row = reservoir_row(k, s);
          double cv = st.volume_nd / dt_nd_;
          je.emplace_back(row, storage_var(k, s, 1), cv);
          je.emplace_back(row, storage_var(k - 1, s, 1), -cv);
          je.emplace_back(row, storage_var(k, s, 2), -1.0);
        }
      }
    }
  }

  void lagrangian_hessian(const Eigen::VectorXd& x, double sigma,
                          const Eigen::VectorXd& ye, const Eigen::VectorXd& yi,
                          std::vector<Triplet>& h) const override {
    h.clear();
    const double wc = aug_.work_coefficient_nd();
    const double wm = aug_.work_exponent();
    auto lower = [&h](int a, int b, double v) {
      if (a >= b) {
        h.emplace_back(a, b, v);
      } else {
        h.emplace_back(b, a, v);
      }
    };
    for (int k = 0; k < N_; ++k) {
      for (int p = 0; p < P_; ++p) {
        const SegPipe& sp = aug_.pipes[p];
        double lam = ye[momentum_row(k, p)];
        auto m = physics::momentum(sp, x[rho_index(k, sp.from)],
                                   x[rho_index(k, sp.to)],
                                   x[pipe_var(k, p, 0)], opts_.smoothing);
        lower(rho_index(k, sp.from), rho_index(k, sp.from), lam * m.d2_rho_i);
        lower(rho_index(k, sp.to), rho_index(k, sp.to), lam * m.d2_rho_j);
        lower(pipe_var(k, p, 0), pipe_var(k, p, 0), lam * m.d2_phi);
      }
      for (int c = 0; c < C_; ++c) {
        const SegCompressor& sc = aug_.compressors[c];
        double alpha = x[comp_var(k, c, 0)];
        double yr = ye[ratio_row(k, c)];
        double rt = x[rho_index(k, sc.to)];
        double rf = x[rho_index(k, sc.from)];
        lower(rho_index(k, sc.to), rho_index(k, sc.to), -yr / (rt * rt));
        lower(rho_index(k, sc.from), rho_index(k, sc.from), yr / (rf * rf));
        lower(comp_var(k, c, 0), comp_var(k, c, 0),
              yr / (alpha * alpha) -
                  ye[work_row(k, c)] * wc * wm * (wm - 1.0) *
                      std::pow(alpha, wm - 2.0));
        lower(comp_var(k, c, 2), comp_var(k, c, 1),
              sigma * energy_coeff_ + yi[power_row(k, c)]);
      }
      for (int i = 0; i < C2_; ++i) {
        int c = type2_[i];
        lower(comp_var(k, c, 1), comp_var(k, c, 0), -yi[direction_row(k, i)]);
      }
      for (int s = 0; s < S_; ++s) {
        const SegStorage& st = aug_.storages[s];
        double yr = ye[regulator_row(k, s)];
        double rm = x[rho_index(k, st.junction)];
        double rw = x[rho_index(k, st.wellhead)];
        double as = x[storage_var(k, s, 0)];
        lower(rho_index(k, st.junction), rho_index(k, st.junction),
              -yr / (rm * rm));
        lower(rho_index(k, st.wellhead), rho_index(k, st.wellhead),
              yr / (rw * rw));
        lower(storage_var(k, s, 0), storage_var(k, s, 0), yr / (as * as));
      }
    }
  }

  void initial_point(Eigen::VectorXd& x) const override {
    x.setZero(num_vars());
    double ref = 1.0;
    if (!aug_.slack_junctions.empty()) {
      ref = slack_rho_[aug_.slack_junctions.front()];
    }
    for (int k = 0; k < N_; ++k) {
      for (int j = 0; j < V_; ++j) {
        const SegJunction& sj = aug_.junctions[j];
        double v = sj.slack ? slack_rho_[static_cast<size_t>(k) * V_ + j]
                            : std::min(std::max(ref, sj.rho_min), sj.rho_max);
        x[rho_index(k, j)] = v;
      }
      for (int c = 0; c < C_; ++c) x[comp_var(k, c, 0)] = 1.0;
      for (int t = 0; t < T_; ++t) {
        size_t at = static_cast<size_t>(k) * T_ + t;
        x[transfer_var(k, t)] = 0.5 * (transfer_lo_[at] + transfer_hi_[at]);
      }
      for (int s = 0; s < S_; ++s) {
        x[storage_var(k, s, 0)] = 1.0;
        x[storage_var(k, s, 1)] = aug_.storages[s].rho_res_initial;
        double hydro =
            physics::static_column_ratio(aug_.storages[s].well_pipes.empty()
                                             ? 0.0
                                             : sum_well_beta(s));
        const SegStorage& st = aug_.storages[s];
        x[rho_index(k, st.wellhead)] =
            std::min(std::max(st.rho_res_initial / hydro,
                              aug_.junctions[st.wellhead].rho_min),
                     aug_.junctions[st.wellhead].rho_max);
        x[rho_index(k, st.bottomhole)] = st.rho_res_initial;
      }
    }
  }

 private:
  int term_var(int k, const BalanceTerm& term) const {
    switch (term.var) {
      case BalanceTerm::Var::PipePhiIn:
        return pipe_var(k, term.index, 2);
      case BalanceTerm::Var::PipePhiOut:
        return pipe_var(k, term.index, 3);
      case BalanceTerm::Var::CompressorFlow:
        return comp_var(k, term.index, 1);
      case BalanceTerm::Var::StorageFlow:
        return storage_var(k, term.index, 4);
      case BalanceTerm::Var::BottomholeFlow:
        return storage_var(k, term.index, 2);
      case BalanceTerm::Var::TransferFlow:
        return transfer_var(k, term.index);
    }
    return -1;
  }

  double sum_well_beta(int s) const {
    double b = 0.0;
    for (int p : aug_.storages[s].well_pipes) b += aug_.pipes[p].beta;
    return b;
  }

  const AugmentedNetwork& aug_;
  TranscriptionOptions opts_;
  int N_ = 0;
  double dt_nd_ = 0.0;
  int V_ = 0, P_ = 0, C_ = 0, T_ = 0, S_ = 0, C2_ = 0;
  std::vector<int> type2_;
  int stride_ = 0, me_node_ = 0, mi_node_ = 0;
  double energy_coeff_ = 0.0, raw_energy_ = 0.0;
  std::vector<double> slack_rho_;
  std::vector<double> transfer_lo_, transfer_hi_, price_coeff_, raw_price_;
};

}  // namespace gasflow
