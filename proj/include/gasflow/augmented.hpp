#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasflow/network.hpp"
#include "gasflow/nondim.hpp"

namespace gasflow {

/// Segment-level junction. The first `num_original_junctions` entries map
/// 1:1 to NetworkModel junctions; then come internal segmentation nodes and
/// finally well junctions (wellhead, internals, bottom-hole) per storage.
struct SegJunction {
  std::string id;
  int parent = -1;    // original junction index, -1 for synthetic nodes
  int storage = -1;   // owning storage for well junctions
  bool wellhead = false;
  bool bottomhole = false;
  bool slack = false;
  TimeSeries slack_pressure;  // Pa
  double rho_min = 0.0, rho_max = 0.0;  // dimensionless density bounds
};

/// Segment-level pipe (axis from -> to). Well segments have their axis
/// pointing down the well (wellhead -> bottom-hole), so beta < 0.
struct SegPipe {
  std::string id;
  int parent = -1;   // original pipe index, -1 for well segments
  int storage = -1;
  int from = -1, to = -1;
  double length_nd = 0.0;   // L / l
  double diameter = 0.0;    // m
  double area = 0.0;        // m^2
  double friction = 0.0;
  double beta = 0.0;
  /// lambda * l * L_nd / D * (e^beta - 1)/beta; multiplies phi|phi| in the
  /// momentum balance.
  double fric_coeff = 0.0;
  double flux_max_nd = 0.0;  // 0 disables the box
};

struct SegCompressor {
  std::string id;
  int parent = -1;
  int from = -1, to = -1;
  CompressorType type = CompressorType::Unidirectional;
  double alpha_max = 2.0;
  double flow_max_nd = 0.0;
  double power_max_nd = 0.0;  // P_max / (a^2 phi0)
};

struct SegStorage {
  std::string id;
  int parent = -1;
  int junction = -1;    // main network junction (seg index)
  int wellhead = -1;
  int bottomhole = -1;
  std::vector<int> well_pipes;  // ordered wellhead -> bottom-hole
  double well_area = 0.0;       // m^2
  double volume_nd = 0.0;       // V / (l * 1 m^2)
  double mass_min_nd = 0.0, mass_max_nd = 0.0, mass_initial_nd = 0.0;
  double rho_res_min = 0.0, rho_res_max = 0.0, rho_res_initial = 0.0;
  double alpha_s_min = 0.0, alpha_s_max = 0.0;
  double flow_max_nd = 0.0;
};

struct SegTransfer {
  std::string id;
  int parent = -1;
  TransferKind kind = TransferKind::Delivery;
  int junction = -1;
  TimeSeries price;     // $/(kg/s * h), physical flow basis
  TimeSeries max_flow;  // kg/s
  TimeSeries min_flow;  // kg/s
};

/// One linear term of a junction mass balance. The balance residual is
///   sum(coeff * var) = 0
/// with fluxes weighted by pipe areas, transfers entering with -f_r / +f_d,
/// and storage flows leaving the network at the main junction.
struct BalanceTerm {
  enum class Var { PipePhiIn, PipePhiOut, CompressorFlow, StorageFlow, BottomholeFlow, TransferFlow };
  Var var;
  int index = -1;
  double coeff = 0.0;
};

struct AugmentedNetwork {
  std::string name;
  ScaleSet scales;
  GasParams gas;
  double horizon_hours = 24.0;
  double delta_km = 10.0;
  int num_original_junctions = 0;

  std::vector<SegJunction> junctions;
  std::vector<SegPipe> pipes;
  std::vector<SegCompressor> compressors;
  std::vector<SegStorage> storages;
  std::vector<SegTransfer> transfers;
  std::vector<std::vector<int>> pipe_segments;  // original pipe -> seg pipes
  std::vector<std::vector<BalanceTerm>> incidence;  // per seg junction

  std::vector<int> slack_junctions;

  /// gamma*T/(gamma-1) * 286.76/G, J/kg; work = coeff * (alpha^m - 1).
  double work_coefficient() const {
    return gas.gamma * gas.temperature / (gas.gamma - 1.0) *
           units::kAirGasConstant / gas.gas_gravity;
  }
  double work_exponent() const { return (gas.gamma - 1.0) / gas.gamma; }
  /// Work coefficient on the dimensionless work scale a^2.
  double work_coefficient_nd() const { return work_coefficient() / scales.work0(); }

  double slack_density(int seg_junction, double hour) const {
    const auto& j = junctions.at(seg_junction);
    return j.slack_pressure.value(hour) / scales.nominal_pressure;
  }
};

inline int segment_count(double length_m, double delta_km) {
  if (delta_km <= 0) throw std::invalid_argument("delta_km must be positive");
  return std::max(1, int(std::ceil(length_m / (delta_km * 1000.0) - 1e-12)));
}

inline AugmentedNetwork segment_network(const NetworkModel& net, double delta_km) {
  AugmentedNetwork aug;
  aug.name = net.name;
  aug.scales = net.scales;
  aug.gas = net.gas;
  aug.horizon_hours = net.horizon_hours;
  aug.delta_km = delta_km;
  aug.num_original_junctions = int(net.junctions.size());

  const double p0 = net.scales.nominal_pressure;
  const double l0 = net.scales.nominal_length;
  const double a = net.scales.sound_speed;
  const double phi0 = net.scales.flux0();

  for (const auto& j : net.junctions) {
    SegJunction sj;
    sj.id = j.id;
    sj.parent = int(&j - net.junctions.data());
    sj.slack = j.slack;
    sj.slack_pressure = j.slack_pressure;
    sj.rho_min = j.p_min / p0;
    sj.rho_max = j.p_max / p0;
    aug.junctions.push_back(std::move(sj));
    if (j.slack) aug.slack_junctions.push_back(int(aug.junctions.size()) - 1);
  }

  auto add_segmented_pipe = [&](const std::string& base_id, int parent_pipe, int storage,
                                int from, int to, double length_m, double diameter,
                                double friction, double g_parallel, double flux_max,
                                double rho_min, double rho_max) {
    const int nseg = segment_count(length_m, delta_km);
    const double seg_len = length_m / nseg;
    std::vector<int> seg_ids;
    int prev = from;
    for (int k = 0; k < nseg; ++k) {
      int next;
      if (k + 1 == nseg) {
        next = to;
      } else {
        SegJunction sj;
        sj.id = base_id + "#" + std::to_string(k + 1);
        sj.storage = storage;
        sj.rho_min = rho_min;
        sj.rho_max = rho_max;
        aug.junctions.push_back(std::move(sj));
        next = int(aug.junctions.size()) - 1;
      }
      SegPipe sp;
      sp.id = nseg == 1 ? base_id : base_id + "/" + std::to_string(k);
      sp.parent = parent_pipe;
      sp.storage = storage;
      sp.from = prev;
      sp.to = next;
      sp.length_nd = seg_len / l0;
      sp.diameter = diameter;
      sp.area = std::numbers::pi * diameter * diameter / 4.0;
      sp.friction = friction;
      sp.beta = inclination_beta(g_parallel, seg_len, a);
      sp.fric_coeff = friction * l0 * sp.length_nd / diameter * expm1_over(sp.beta);
      sp.flux_max_nd = flux_max > 0 ? flux_max / phi0 : 0.0;
      aug.pipes.push_back(std::move(sp));
      seg_ids.push_back(int(aug.pipes.size()) - 1);
      prev = next;
    }
    return seg_ids;
  };

  for (std::size_t pi = 0; pi < net.pipes.size(); ++pi) {
    const Pipe& p = net.pipes[pi];
    int from = net.junction_index(p.from);
    int to = net.junction_index(p.to);
    if (from < 0 || to < 0) throw std::invalid_argument(p.id + ": unresolved endpoint");
    double rho_min = std::min(aug.junctions[from].rho_min, aug.junctions[to].rho_min);
    double rho_max = std::max(aug.junctions[from].rho_max, aug.junctions[to].rho_max);
    aug.pipe_segments.push_back(add_segmented_pipe(p.id, int(pi), -1, from, to, p.length,
                                                   p.diameter, p.friction, p.g_parallel(),
                                                   p.flux_max, rho_min, rho_max));
  }

  for (const auto& c : net.compressors) {
    SegCompressor sc;
    sc.id = c.id;
    sc.parent = int(&c - net.compressors.data());
    sc.from = net.junction_index(c.from);
    sc.to = net.junction_index(c.to);
    if (sc.from < 0 || sc.to < 0) throw std::invalid_argument(c.id + ": unresolved endpoint");
    sc.type = c.type;
    sc.alpha_max = c.alpha_max;
    sc.flow_max_nd = c.flow_max / phi0;
    sc.power_max_nd = c.power_max / net.scales.power0();
    aug.compressors.push_back(std::move(sc));
  }

  for (std::size_t si = 0; si < net.storages.size(); ++si) {
    const Storage& s = net.storages[si];
    SegStorage ss;
    ss.id = s.id;
    ss.parent = int(si);
    ss.junction = net.junction_index(s.junction);
    if (ss.junction < 0) throw std::invalid_argument(s.id + ": unresolved junction");
    ss.well_area = s.well_area();

    const double rho_w_min = s.wellhead_p_min / p0;
    const double rho_w_max = s.wellhead_p_max / p0;
    SegJunction wh;
    wh.id = s.id + ":wh";
    wh.storage = int(si);
    wh.wellhead = true;
    wh.rho_min = rho_w_min;
    wh.rho_max = rho_w_max;
    aug.junctions.push_back(std::move(wh));
    ss.wellhead = int(aug.junctions.size()) - 1;

    SegJunction bh;
    bh.id = s.id + ":bh";
    bh.storage = int(si);
    bh.bottomhole = true;
    bh.rho_min = rho_w_min;
    bh.rho_max = rho_w_max;
    aug.junctions.push_back(std::move(bh));
    ss.bottomhole = int(aug.junctions.size()) - 1;

    double well_flux = s.well_flux_max > 0
                           ? s.well_flux_max
                           : 1.5 * s.flow_max / ss.well_area;
    ss.well_pipes = add_segmented_pipe(s.id + ":w", -1, int(si), ss.wellhead, ss.bottomhole,
                                       s.well_length, s.well_diameter, s.well_friction,
                                       units::kGravity, well_flux, rho_w_min, rho_w_max);

    ss.volume_nd = s.reservoir_volume / net.scales.volume0();
    ss.mass_min_nd = s.mass_min / net.scales.mass0();
    ss.mass_max_nd = s.mass_max / net.scales.mass0();
    ss.mass_initial_nd = s.mass_initial / net.scales.mass0();
    ss.rho_res_min = ss.mass_min_nd / ss.volume_nd;
    ss.rho_res_max = ss.mass_max_nd / ss.volume_nd;
    ss.rho_res_initial = ss.mass_initial_nd / ss.volume_nd;
    ss.alpha_s_max = s.regulator_alpha_max;
    ss.alpha_s_min = 1.0 / s.regulator_alpha_max;
    ss.flow_max_nd = s.flow_max / phi0;
    aug.storages.push_back(std::move(ss));
  }

  for (const auto& t : net.transfers) {
    SegTransfer st;
    st.id = t.id;
    st.parent = int(&t - net.transfers.data());
    st.kind = t.kind;
    st.junction = net.junction_index(t.junction);
    if (st.junction < 0) throw std::invalid_argument(t.id + ": unresolved junction");
    st.price = t.price;
    st.max_flow = t.max_flow;
    st.min_flow = t.min_flow;
    aug.transfers.push_back(std::move(st));
  }

  aug.incidence.assign(aug.junctions.size(), {});
  for (std::size_t pi = 0; pi < aug.pipes.size(); ++pi) {
    const SegPipe& p = aug.pipes[pi];
    aug.incidence[p.from].push_back({BalanceTerm::Var::PipePhiIn, int(pi), p.area});
    aug.incidence[p.to].push_back({BalanceTerm::Var::PipePhiOut, int(pi), -p.area});
  }
  for (std::size_t ci = 0; ci < aug.compressors.size(); ++ci) {
    const SegCompressor& c = aug.compressors[ci];
    aug.incidence[c.from].push_back({BalanceTerm::Var::CompressorFlow, int(ci), 1.0});
    aug.incidence[c.to].push_back({BalanceTerm::Var::CompressorFlow, int(ci), -1.0});
  }
  for (std::size_t si = 0; si < aug.storages.size(); ++si) {
    const SegStorage& s = aug.storages[si];
    aug.incidence[s.junction].push_back({BalanceTerm::Var::StorageFlow, int(si), 1.0});
    aug.incidence[s.wellhead].push_back({BalanceTerm::Var::StorageFlow, int(si), -1.0});
    aug.incidence[s.bottomhole].push_back({BalanceTerm::Var::BottomholeFlow, int(si), 1.0});
  }
  for (std::size_t ti = 0; ti < aug.transfers.size(); ++ti) {
    const SegTransfer& t = aug.transfers[ti];
    double sign = t.kind == TransferKind::Receipt ? -1.0 : 1.0;
    aug.incidence[t.junction].push_back({BalanceTerm::Var::TransferFlow, int(ti), sign});
  }

  return aug;
}

}  // namespace gasflow
