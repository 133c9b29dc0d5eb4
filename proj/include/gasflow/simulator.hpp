#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "gasflow/augmented.hpp"
#include "gasflow/physics.hpp"
#include "gasflow/trajectory.hpp"
#include "gasflow/transcription.hpp"
#include "gasflow/units.hpp"

namespace gasflow {

/// Day-ahead operation: every actuator as a step function of time. Values
/// are physical (ratios dimensionless, flows kg/s, slack pressures Pa);
/// a value holds from its breakpoint until the next one.
///
/// A storage is driven either by its regulator ratio or by a prescribed
/// surface flow: leave storage_flow empty to drive every storage by
/// alpha_s, or fill it (one series per storage) to pin f_s and let the
/// regulator ratio fall out of the wellhead state.
struct ControlSchedule {
  std::vector<TimeSeries> compressor_ratio;  // per compressor
  std::vector<TimeSeries> storage_ratio;     // per storage, regulator alpha_s
  std::vector<TimeSeries> storage_flow;      // per storage, kg/s (optional)
  std::vector<TimeSeries> transfer_flow;     // per transfer point, kg/s
  std::vector<TimeSeries> slack_pressure;    // per slack junction, Pa
};

/// Differential state of the reduced-order DAE: densities at the segment
/// junctions plus one reservoir density per storage, all dimensionless.
struct SimState {
  Eigen::VectorXd rho;      // size = aug.junctions.size()
  Eigen::VectorXd rho_res;  // size = aug.storages.size()
};

struct SimOptions {
  double dt_seconds = 60.0;
  double newton_tol = 1e-10;  // residual infinity norm, dimensionless
  int max_newton_iterations = 50;
  double smoothing = 0.0;  // phi|phi| smoothing; 0 is the exact law
  int sample_every = 1;    // trajectory rows every k-th step
};

enum class SimStatus { Ok, NewtonFailure };

struct SimResult {
  SimStatus status = SimStatus::Ok;
  Trajectory trajectory;
  std::vector<std::string> warnings;
  int failed_step = -1;
  double worst_residual = 0.0;
  int total_newton_iterations = 0;
};

// Forward transient integration of the network DAE with implicit Euler in
// time and a damped Newton solve of the coupled algebraic plus discretized
// differential residuals at every step. The residuals are assembled here
// from the segment physics directly (product-form boost and regulator
// relations, exact phi|phi| by default), so the simulator shares no
// equation code with the optimizer's transcription beyond the momentum
// closure; agreement between the two is a meaningful check.
//
// Unknowns per step: junction densities, phi+/phi- per segment pipe,
// compressor flows, and (rho_res, f_bh, f_wh, f_s) per storage. Controls
// enter as constants sampled at the midpoint of each step. Slack junctions
// trade their nodal balance for a pinned density; the balance residual at
// a slack junction is reported as the makeup flow the boundary supplies.
class Simulator {
 public:
  explicit Simulator(const AugmentedNetwork& aug, SimOptions opts = {})
      : aug_(aug), o_(opts) {
    V_ = int(aug.junctions.size());
    P_ = int(aug.pipes.size());
    C_ = int(aug.compressors.size());
    S_ = int(aug.storages.size());
    T_ = int(aug.transfers.size());
    dim_ = V_ + 2 * P_ + C_ + 4 * S_;
    slack_of_.assign(V_, -1);
    for (std::size_t i = 0; i < aug.slack_junctions.size(); ++i) {
      slack_of_[aug.slack_junctions[i]] = int(i);
    }
  }

  int dim() const { return dim_; }
  int rho_at(int j) const { return j; }
  int phip_at(int p) const { return V_ + 2 * p; }
  int phim_at(int p) const { return V_ + 2 * p + 1; }
  int comp_at(int c) const { return V_ + 2 * P_ + c; }
  // which: 0 rho_res, 1 f_bh, 2 f_wh, 3 f_s
  int storage_at(int s, int which) const {
    return V_ + 2 * P_ + C_ + 4 * s + which;
  }

  /// Consistent algebraic completion of a differential state: pipe phi+
  /// from the momentum closure, then the remaining flux variables from the
  /// linear mass/balance subsystem. Density rates are unknowns biased to
  /// zero unless supplied, in which case the completion reproduces the
  /// exact flux field of a transcription node. Slack junction balances
  /// close through free makeup terms.
  Eigen::VectorXd project_initial_state(
      const SimState& state, const Eigen::VectorXd& transfer_flow_nd,
      std::vector<double>* slack_makeup = nullptr,
      const Eigen::VectorXd* density_rates = nullptr,
      const Eigen::VectorXd* reservoir_rates = nullptr) const {
    check_state(state);
    if (int(transfer_flow_nd.size()) != T_) {
      throw std::invalid_argument("project_initial_state: transfer flow size");
    }
    if (density_rates && S_ > 0 && !reservoir_rates) {
      throw std::invalid_argument(
          "project_initial_state: reservoir rates required with density rates");
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim_);
    u.head(V_) = state.rho;
    for (int s = 0; s < S_; ++s) u[storage_at(s, 0)] = state.rho_res[s];
    for (int p = 0; p < P_; ++p) {
      u[phip_at(p)] = physics::steady_flux(aug_.pipes[p], state.rho[aug_.pipes[p].from],
                                           state.rho[aug_.pipes[p].to]);
    }

    // linear least squares in [phi- | f_c | f_bh f_wh f_s | makeup | rates]
    const int nslack = int(aug_.slack_junctions.size());
    const bool free_rates = density_rates == nullptr;
    const int nrates = free_rates ? V_ + S_ : 0;
    const int cols = P_ + C_ + 3 * S_ + nslack + nrates;
    auto col_phim = [&](int p) { return p; };
    auto col_comp = [&](int c) { return P_ + c; };
    auto col_store = [&](int s, int w) { return P_ + C_ + 3 * s + w; };
    auto col_makeup = [&](int i) { return P_ + C_ + 3 * S_ + i; };
    auto col_rate = [&](int j) { return P_ + C_ + 3 * S_ + nslack + j; };
    auto col_res_rate = [&](int s) {
      return P_ + C_ + 3 * S_ + nslack + V_ + s;
    };
    std::vector<int> slack_col(V_, -1);
    for (int i = 0; i < nslack; ++i) slack_col[aug_.slack_junctions[i]] = i;

    const int rows = P_ + V_ + 2 * S_ + nrates;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    int r = 0;
    for (int p = 0; p < P_; ++p, ++r) {  // L(drho_i + drho_j) + 4 phi- = 0
      const SegPipe& sp = aug_.pipes[p];
      A(r, col_phim(p)) = 4.0;
      if (free_rates) {
        A(r, col_rate(sp.from)) += sp.length_nd;
        A(r, col_rate(sp.to)) += sp.length_nd;
      } else {
        b[r] -= sp.length_nd *
                ((*density_rates)[sp.from] + (*density_rates)[sp.to]);
      }
    }
    for (int j = 0; j < V_; ++j, ++r) {  // nodal balance, makeup on slacks
      for (const BalanceTerm& term : aug_.incidence[j]) {
        switch (term.var) {
          case BalanceTerm::Var::PipePhiIn:
            b[r] -= term.coeff * u[phip_at(term.index)];
            A(r, col_phim(term.index)) -= term.coeff;
            break;
          case BalanceTerm::Var::PipePhiOut:
            b[r] -= term.coeff * u[phip_at(term.index)];
            A(r, col_phim(term.index)) += term.coeff;
            break;
          case BalanceTerm::Var::CompressorFlow:
            A(r, col_comp(term.index)) += term.coeff;
            break;
          case BalanceTerm::Var::StorageFlow:
            A(r, col_store(term.index, 2)) += term.coeff;
            break;
          case BalanceTerm::Var::BottomholeFlow:
            A(r, col_store(term.index, 0)) += term.coeff;
            break;
          case BalanceTerm::Var::TransferFlow:
            b[r] -= term.coeff * transfer_flow_nd[term.index];
            break;
        }
      }
      if (slack_col[j] >= 0) A(r, col_makeup(slack_col[j])) = 1.0;
    }
    for (int s = 0; s < S_; ++s, ++r) {  // V drho_res = f_bh
      A(r, col_store(s, 0)) = -1.0;
      if (free_rates) {
        A(r, col_res_rate(s)) = aug_.storages[s].volume_nd;
      } else {
        b[r] -= aug_.storages[s].volume_nd * (*reservoir_rates)[s];
      }
    }
    for (int s = 0; s < S_; ++s, ++r) {  // f_s = f_wh
      A(r, col_store(s, 2)) = 1.0;
      A(r, col_store(s, 1)) = -1.0;
    }
    const double rate_weight = 1e-6;
    for (int i = 0; i < nrates; ++i, ++r) {
      A(r, P_ + C_ + 3 * S_ + nslack + i) = rate_weight;
    }

    Eigen::VectorXd w = A.colPivHouseholderQr().solve(b);
    for (int p = 0; p < P_; ++p) u[phim_at(p)] = w[col_phim(p)];
    for (int c = 0; c < C_; ++c) u[comp_at(c)] = w[col_comp(c)];
    for (int s = 0; s < S_; ++s) {
      u[storage_at(s, 1)] = w[col_store(s, 0)];
      u[storage_at(s, 2)] = w[col_store(s, 1)];
      u[storage_at(s, 3)] = w[col_store(s, 2)];
    }
    if (slack_makeup) {
      slack_makeup->assign(nslack, 0.0);
      for (int i = 0; i < nslack; ++i) (*slack_makeup)[i] = w[col_makeup(i)];
    }
    return u;
  }

  SimResult run(const ControlSchedule& sched, const SimState& init,
                double horizon_hours) const {
    check_state(init);
    check_schedule(sched);
    SimResult res;
    const double dt_h = o_.dt_seconds / units::kSecondsPerHour;
    const double dt_nd = o_.dt_seconds / aug_.scales.time0();
    const int steps = int(std::lround(horizon_hours / dt_h));
    if (steps < 1 || std::abs(steps * dt_h - horizon_hours) > 1e-9) {
      throw std::invalid_argument("simulate: dt must divide the horizon");
    }

    warn_schedule_bounds(sched, res);
    StepControls ctl;
    sample_controls(sched, 0.5 * dt_h, ctl);

    Eigen::VectorXd transfer0(T_);
    sample_transfers_at(sched, 0.0, transfer0);
    std::vector<double> makeup;
    Eigen::VectorXd u = project_initial_state(init, transfer0, &makeup);

    record(res.trajectory, 0.0, u, transfer0, makeup);

    Eigen::SparseMatrix<double> J(dim_, dim_);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    {
      std::vector<Eigen::Triplet<double>> pat;
      assemble(u, u, dt_nd, ctl, nullptr, &pat);
      J.setFromTriplets(pat.begin(), pat.end());
      lu.analyzePattern(J);
    }

    Eigen::VectorXd prev = u, F(dim_), Ft(dim_), du, ut;
    std::vector<Eigen::Triplet<double>> trip;
    bool mass_warned = false;
    for (int n = 1; n <= steps; ++n) {
      const double t_prev = (n - 1) * dt_h;
      sample_controls(sched, t_prev + 0.5 * dt_h, ctl);
      prev = u;

      double fn = 0.0;
      bool done = false;
      for (int it = 0; it < o_.max_newton_iterations; ++it) {
        assemble(u, prev, dt_nd, ctl, &F, &trip);
        fn = F.lpNorm<Eigen::Infinity>();
        ++res.total_newton_iterations;
        if (fn <= o_.newton_tol) {
          done = true;
          break;
        }
        J.setFromTriplets(trip.begin(), trip.end());
        lu.factorize(J);
        if (lu.info() != Eigen::Success) break;
        du = lu.solve(-F);

        // keep densities positive, then backtrack on the residual norm
        double alpha = 1.0;
        for (int j = 0; j < V_; ++j) {
          if (du[j] < 0.0) alpha = std::min(alpha, -0.9 * u[j] / du[j]);
        }
        for (int s = 0; s < S_; ++s) {
          int at = storage_at(s, 0);
          if (du[at] < 0.0) alpha = std::min(alpha, -0.9 * u[at] / du[at]);
        }
        bool stepped = false;
        for (int bt = 0; bt < 30; ++bt) {
          ut = u + alpha * du;
          assemble(ut, prev, dt_nd, ctl, &Ft, nullptr);
          double ft = Ft.lpNorm<Eigen::Infinity>();
          if (std::isfinite(ft) && ft <= (1.0 - 1e-4 * alpha) * fn) {
            u = ut;
            stepped = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!stepped) break;
      }
      if (!done) {
        res.status = SimStatus::NewtonFailure;
        res.failed_step = n;
        res.worst_residual = fn;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "newton stalled at step %d (t = %.4f h), residual %.3e",
                      n, n * dt_h, fn);
        res.warnings.push_back(buf);
        return res;
      }

      for (int s = 0; s < S_ && !mass_warned; ++s) {
        double m = u[storage_at(s, 0)] * aug_.storages[s].volume_nd;
        if (m < aug_.storages[s].mass_min_nd - 1e-9 ||
            m > aug_.storages[s].mass_max_nd + 1e-9) {
          res.warnings.push_back(aug_.storages[s].id +
                                 ": reservoir mass outside its bounds");
          mass_warned = true;
        }
      }

      if (n % o_.sample_every == 0 || n == steps) {
        Eigen::VectorXd tf(T_);
        for (int t = 0; t < T_; ++t) tf[t] = ctl.transfer_nd[t];
        compute_makeup(u, ctl, makeup);
        record(res.trajectory, n * dt_h, u, tf, makeup);
      }
    }
    return res;
  }

 private:
  struct StepControls {
    std::vector<double> alpha;         // per compressor
    std::vector<double> alpha_s;       // per storage (ratio mode)
    std::vector<double> storage_nd;    // per storage (flow mode)
    bool flow_mode = false;
    std::vector<double> transfer_nd;   // per transfer
    std::vector<double> slack_rho;     // per slack junction (order of list)
  };

  void check_state(const SimState& st) const {
    if (int(st.rho.size()) != V_ || int(st.rho_res.size()) != S_) {
      throw std::invalid_argument("simulator state has wrong dimensions");
    }
    for (int j = 0; j < V_; ++j) {
      if (!(st.rho[j] > 0.0)) {
        throw std::invalid_argument("simulator state: density must be positive");
      }
    }
    for (int s = 0; s < S_; ++s) {
      if (!(st.rho_res[s] > 0.0)) {
        throw std::invalid_argument("simulator state: density must be positive");
      }
    }
  }

  void check_schedule(const ControlSchedule& s) const {
    const bool flow_mode = !s.storage_flow.empty();
    if (int(s.compressor_ratio.size()) != C_ ||
        int(s.transfer_flow.size()) != T_ ||
        int(s.slack_pressure.size()) != int(aug_.slack_junctions.size()) ||
        (flow_mode ? int(s.storage_flow.size()) != S_
                   : int(s.storage_ratio.size()) != S_)) {
      throw std::invalid_argument("control schedule does not match the network");
    }
  }

  void sample_transfers_at(const ControlSchedule& s, double hour,
                           Eigen::VectorXd& out) const {
    const double mf0 = aug_.scales.mass_flow0();
    for (int t = 0; t < T_; ++t) out[t] = s.transfer_flow[t].value(hour) / mf0;
  }

  void sample_controls(const ControlSchedule& s, double hour,
                       StepControls& c) const {
    c.flow_mode = !s.storage_flow.empty();
    c.alpha.resize(C_);
    c.alpha_s.resize(S_);
    c.storage_nd.resize(S_);
    c.transfer_nd.resize(T_);
    c.slack_rho.resize(aug_.slack_junctions.size());
    const double mf0 = aug_.scales.mass_flow0();
    const double p0 = aug_.scales.nominal_pressure;
    for (int i = 0; i < C_; ++i) c.alpha[i] = s.compressor_ratio[i].value(hour);
    for (int i = 0; i < S_; ++i) {
      if (c.flow_mode) {
        c.storage_nd[i] = s.storage_flow[i].value(hour) / mf0;
      } else {
        c.alpha_s[i] = s.storage_ratio[i].value(hour);
      }
    }
    for (int i = 0; i < T_; ++i) {
      c.transfer_nd[i] = s.transfer_flow[i].value(hour) / mf0;
    }
    for (std::size_t i = 0; i < aug_.slack_junctions.size(); ++i) {
      c.slack_rho[i] = s.slack_pressure[i].value(hour) / p0;
    }
  }

  void warn_schedule_bounds(const ControlSchedule& s, SimResult& res) const {
    for (int i = 0; i < C_; ++i) {
      if (s.compressor_ratio[i].min_value() < 1.0 - 1e-12 ||
          s.compressor_ratio[i].max_value() >
              aug_.compressors[i].alpha_max + 1e-9) {
        res.warnings.push_back(aug_.compressors[i].id +
                               ": ratio outside operational bounds");
      }
    }
    for (int i = 0; i < S_; ++i) {
      const SegStorage& st = aug_.storages[i];
      if (s.storage_flow.empty()) {
        if (s.storage_ratio[i].min_value() < st.alpha_s_min - 1e-9 ||
            s.storage_ratio[i].max_value() > st.alpha_s_max + 1e-9) {
          res.warnings.push_back(st.id +
                                 ": regulator ratio outside operational bounds");
        }
      } else {
        double fmax = st.flow_max_nd * aug_.scales.mass_flow0();
        if (s.storage_flow[i].min_value() < -fmax - 1e-9 ||
            s.storage_flow[i].max_value() > fmax + 1e-9) {
          res.warnings.push_back(st.id +
                                 ": surface flow outside operational bounds");
        }
      }
    }
  }

  int balance_var(const BalanceTerm& term, double& sign_phim) const {
    // returns the phi+ column for pipe terms; the caller adds the phi-
    // contribution with sign_phim
    switch (term.var) {
      case BalanceTerm::Var::PipePhiIn:
        sign_phim = -1.0;
        return phip_at(term.index);
      case BalanceTerm::Var::PipePhiOut:
        sign_phim = 1.0;
        return phip_at(term.index);
      case BalanceTerm::Var::CompressorFlow:
        sign_phim = 0.0;
        return comp_at(term.index);
      case BalanceTerm::Var::StorageFlow:
        sign_phim = 0.0;
        return storage_at(term.index, 3);
      case BalanceTerm::Var::BottomholeFlow:
        sign_phim = 0.0;
        return storage_at(term.index, 1);
      case BalanceTerm::Var::TransferFlow:
        sign_phim = 0.0;
        return -1;  // control constant
    }
    return -1;
  }

  /// Residual and/or Jacobian triplets of the implicit Euler step from
  /// `prev` to `u` with the given controls.
  void assemble(const Eigen::VectorXd& u, const Eigen::VectorXd& prev,
                double dt_nd, const StepControls& ctl, Eigen::VectorXd* F,
                std::vector<Eigen::Triplet<double>>* Jt) const {
    if (F) F->setZero(dim_);
    if (Jt) Jt->clear();
    auto jac = [&](int r, int c, double v) {
      if (Jt) Jt->emplace_back(r, c, v);
    };
    int r = 0;
    for (int j = 0; j < V_; ++j, ++r) {
      if (slack_of_[j] >= 0) {
        if (F) (*F)[r] = u[rho_at(j)] - ctl.slack_rho[slack_of_[j]];
        jac(r, rho_at(j), 1.0);
        continue;
      }
      double acc = 0.0;
      for (const BalanceTerm& term : aug_.incidence[j]) {
        double sm = 0.0;
        int at = balance_var(term, sm);
        if (at < 0) {
          acc += term.coeff * ctl.transfer_nd[term.index];
          continue;
        }
        acc += term.coeff * u[at];
        jac(r, at, term.coeff);
        if (sm != 0.0) {
          acc += term.coeff * sm * u[phim_at(term.index)];
          jac(r, phim_at(term.index), term.coeff * sm);
        }
      }
      if (F) (*F)[r] = acc;
    }
    for (int p = 0; p < P_; ++p, ++r) {  // mass
      const SegPipe& sp = aug_.pipes[p];
      double cm = sp.length_nd / dt_nd;
      if (F) {
        (*F)[r] = cm * (u[rho_at(sp.from)] - prev[rho_at(sp.from)] +
                        u[rho_at(sp.to)] - prev[rho_at(sp.to)]) +
                  4.0 * u[phim_at(p)];
      }
      jac(r, rho_at(sp.from), cm);
      jac(r, rho_at(sp.to), cm);
      jac(r, phim_at(p), 4.0);
    }
    for (int p = 0; p < P_; ++p, ++r) {  // momentum
      const SegPipe& sp = aug_.pipes[p];
      auto m = physics::momentum(sp, u[rho_at(sp.from)], u[rho_at(sp.to)],
                                 u[phip_at(p)], o_.smoothing);
      if (F) (*F)[r] = m.r;
      jac(r, rho_at(sp.from), m.d_rho_i);
      jac(r, rho_at(sp.to), m.d_rho_j);
      jac(r, phip_at(p), m.d_phi);
    }
    for (int c = 0; c < C_; ++c, ++r) {  // boost ratio
      const SegCompressor& sc = aug_.compressors[c];
      if (F) (*F)[r] = u[rho_at(sc.to)] - ctl.alpha[c] * u[rho_at(sc.from)];
      jac(r, rho_at(sc.to), 1.0);
      jac(r, rho_at(sc.from), -ctl.alpha[c]);
    }
    for (int s = 0; s < S_; ++s) {
      const SegStorage& st = aug_.storages[s];
      if (ctl.flow_mode) {  // surface flow pinned, regulator ratio floats
        if (F) (*F)[r] = u[storage_at(s, 3)] - ctl.storage_nd[s];
        jac(r, storage_at(s, 3), 1.0);
      } else {  // regulator
        if (F) {
          (*F)[r] =
              u[rho_at(st.junction)] - ctl.alpha_s[s] * u[rho_at(st.wellhead)];
        }
        jac(r, rho_at(st.junction), 1.0);
        jac(r, rho_at(st.wellhead), -ctl.alpha_s[s]);
      }
      ++r;
      if (F) (*F)[r] = u[rho_at(st.bottomhole)] - u[storage_at(s, 0)];
      jac(r, rho_at(st.bottomhole), 1.0);
      jac(r, storage_at(s, 0), -1.0);
      ++r;
      if (F) (*F)[r] = u[storage_at(s, 3)] - u[storage_at(s, 2)];
      jac(r, storage_at(s, 3), 1.0);
      jac(r, storage_at(s, 2), -1.0);
      ++r;
      double cv = st.volume_nd / dt_nd;
      if (F) {
        (*F)[r] = cv * (u[storage_at(s, 0)] - prev[storage_at(s, 0)]) -
                  u[storage_at(s, 1)];
      }
      jac(r, storage_at(s, 0), cv);
      jac(r, storage_at(s, 1), -1.0);
      ++r;
    }
  }

  void compute_makeup(const Eigen::VectorXd& u, const StepControls& ctl,
                      std::vector<double>& makeup) const {
    makeup.assign(aug_.slack_junctions.size(), 0.0);
    for (std::size_t i = 0; i < aug_.slack_junctions.size(); ++i) {
      double acc = 0.0;
      for (const BalanceTerm& term : aug_.incidence[aug_.slack_junctions[i]]) {
        double sm = 0.0;
        int at = balance_var(term, sm);
        if (at < 0) {
          acc += term.coeff * ctl.transfer_nd[term.index];
          continue;
        }
        acc += term.coeff * u[at];
        if (sm != 0.0) acc += term.coeff * sm * u[phim_at(term.index)];
      }
      // the balance convention counts outflow positive, so the boundary
      // supplies the negated residual
      makeup[i] = -acc * aug_.scales.mass_flow0();
    }
  }

  void record(Trajectory& tr, double hour, const Eigen::VectorXd& u,
              const Eigen::VectorXd& transfer_nd,
              const std::vector<double>& makeup) const {
    const ScaleSet& sc = aug_.scales;
    const double p0 = sc.nominal_pressure;
    const double mf0 = sc.mass_flow0();
    const int J = aug_.num_original_junctions;
    const int OP = int(aug_.pipe_segments.size());
    tr.hours.push_back(hour);
    auto& row_p = tr.junction_pressure.emplace_back(J);
    for (int j = 0; j < J; ++j) row_p[j] = u[rho_at(j)] * p0;
    auto& row_in = tr.pipe_inflow.emplace_back(OP);
    auto& row_out = tr.pipe_outflow.emplace_back(OP);
    auto& row_pack = tr.pipe_linepack.emplace_back(OP);
    for (int p = 0; p < OP; ++p) {
      const auto& segs = aug_.pipe_segments[p];
      const SegPipe& first = aug_.pipes[segs.front()];
      const SegPipe& last = aug_.pipes[segs.back()];
      row_in[p] = (u[phip_at(segs.front())] - u[phim_at(segs.front())]) *
                  first.area * sc.flux0();
      row_out[p] = (u[phip_at(segs.back())] + u[phim_at(segs.back())]) *
                   last.area * sc.flux0();
      row_pack[p] =
          pipe_linepack_kg(aug_, p, [&](int j) { return u[rho_at(j)]; });
    }
    auto& row_ca = tr.compressor_ratio.emplace_back(C_);
    auto& row_cf = tr.compressor_flow.emplace_back(C_);
    auto& row_cp = tr.compressor_power.emplace_back(C_);
    for (int c = 0; c < C_; ++c) {
      const SegCompressor& cc = aug_.compressors[c];
      double alpha = u[rho_at(cc.to)] / u[rho_at(cc.from)];
      row_ca[c] = alpha;
      row_cf[c] = u[comp_at(c)] * mf0;
      double w = aug_.work_coefficient() *
                 (std::pow(std::max(alpha, 1.0), aug_.work_exponent()) - 1.0);
      row_cp[c] = w * u[comp_at(c)] * mf0;
    }
    auto& row_t = tr.transfer_flow.emplace_back(T_);
    for (int t = 0; t < T_; ++t) row_t[t] = transfer_nd[t] * mf0;
    tr.slack_makeup.push_back(makeup);
    auto& row_sa = tr.storage_ratio.emplace_back(S_);
    auto& row_ss = tr.storage_surface_flow.emplace_back(S_);
    auto& row_sw = tr.storage_wellhead_flow.emplace_back(S_);
    auto& row_sb = tr.storage_bottomhole_flow.emplace_back(S_);
    auto& row_sp = tr.storage_reservoir_pressure.emplace_back(S_);
    auto& row_sm = tr.storage_reservoir_mass.emplace_back(S_);
    auto& row_swp = tr.storage_wellhead_pressure.emplace_back(S_);
    for (int s = 0; s < S_; ++s) {
      const SegStorage& st = aug_.storages[s];
      row_sa[s] = u[rho_at(st.junction)] / u[rho_at(st.wellhead)];
      row_ss[s] = u[storage_at(s, 3)] * mf0;
      row_sw[s] = u[storage_at(s, 2)] * mf0;
      row_sb[s] = u[storage_at(s, 1)] * mf0;
      row_sp[s] = u[storage_at(s, 0)] * p0;
      row_sm[s] = u[storage_at(s, 0)] * st.volume_nd * sc.mass0();
      row_swp[s] = u[rho_at(st.wellhead)] * p0;
    }
  }

  const AugmentedNetwork& aug_;
  SimOptions o_;
  int V_ = 0, P_ = 0, C_ = 0, S_ = 0, T_ = 0, dim_ = 0;
  std::vector<int> slack_of_;
};

/// Differential state of transcription node k.
inline SimState sim_state_from_nlp(const TranscribedNlp& nlp,
                                   const Eigen::VectorXd& x, int k) {
  const AugmentedNetwork& aug = nlp.network();
  SimState st;
  st.rho.resize(aug.junctions.size());
  st.rho_res.resize(aug.storages.size());
  for (int j = 0; j < int(aug.junctions.size()); ++j) {
    st.rho[j] = x[nlp.rho_index(k, j)];
  }
  for (int s = 0; s < int(aug.storages.size()); ++s) {
    st.rho_res[s] = x[nlp.storage_var(k, s, 1)];
  }
  return st;
}

/// Step-function control schedule replaying an optimizer solution. The
/// transcription is a backward difference, so node k's actuator values are
/// in force over the interval ((k-1)dt, k dt]; the breakpoint written at
/// hour (k-1)dt therefore carries node k's values, and a simulation started
/// from the node-0 state visits the hourly states in order.
///
/// Storages replay flow-driven by default (day-ahead operation pins the
/// surface flow); pass flow_driven_storage = false to replay the regulator
/// ratios instead.
inline ControlSchedule schedule_from_nlp(const TranscribedNlp& nlp,
                                         const Eigen::VectorXd& x,
                                         bool flow_driven_storage = true) {
  const AugmentedNetwork& aug = nlp.network();
  const double mf0 = aug.scales.mass_flow0();
  const double p0 = aug.scales.nominal_pressure;
  const int N = nlp.num_nodes();
  ControlSchedule sched;
  auto series = [&](auto&& value_at_node) {
    TimeSeries s;
    for (int h = 0; h < N; ++h) {
      s.add(h * nlp.dt_hours(), value_at_node((h + 1) % N));
    }
    return s;
  };
  for (int c = 0; c < int(aug.compressors.size()); ++c) {
    sched.compressor_ratio.push_back(
        series([&](int k) { return x[nlp.comp_var(k, c, 0)]; }));
  }
  for (int s = 0; s < int(aug.storages.size()); ++s) {
    if (flow_driven_storage) {
      sched.storage_flow.push_back(
          series([&](int k) { return x[nlp.storage_var(k, s, 4)] * mf0; }));
    } else {
      sched.storage_ratio.push_back(
          series([&](int k) { return x[nlp.storage_var(k, s, 0)]; }));
    }
  }
  for (int t = 0; t < int(aug.transfers.size()); ++t) {
    sched.transfer_flow.push_back(
        series([&](int k) { return x[nlp.transfer_var(k, t)] * mf0; }));
  }
  for (int j : aug.slack_junctions) {
    sched.slack_pressure.push_back(series([&](int k) {
      return x[nlp.rho_index(k, j)] * p0;
    }));
  }
  return sched;
}

}  // namespace gasflow
