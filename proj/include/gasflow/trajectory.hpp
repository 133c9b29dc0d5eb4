#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gasflow/augmented.hpp"
#include "gasflow/transcription.hpp"

namespace gasflow {

/// Time-indexed physical-unit view of one network solution. Rows are grid
/// instants (the optimizer's hourly nodes, or the simulator's fine steps);
/// columns follow the original model entities, not the internal segments.
struct Trajectory {
  std::vector<double> hours;

  // [time][original junction] Pa
  std::vector<std::vector<double>> junction_pressure;
  // [time][original pipe] kg/s, positive along from -> to
  std::vector<std::vector<double>> pipe_inflow;
  std::vector<std::vector<double>> pipe_outflow;
  // [time][compressor]
  std::vector<std::vector<double>> compressor_ratio;
  std::vector<std::vector<double>> compressor_flow;   // kg/s
  std::vector<std::vector<double>> compressor_power;  // W
  // [time][transfer] kg/s, receipts into the network, deliveries out of it
  std::vector<std::vector<double>> transfer_flow;
  // [time][original pipe] kg stored along the pipe
  std::vector<std::vector<double>> pipe_linepack;
  // [time][slack junction] kg/s supplied by the pressure boundary beyond the
  // listed transfers; identically zero on optimizer solutions
  std::vector<std::vector<double>> slack_makeup;
  // [time][storage]
  std::vector<std::vector<double>> storage_ratio;         // regulator alpha_s
  std::vector<std::vector<double>> storage_surface_flow;  // kg/s, out of main net
  std::vector<std::vector<double>> storage_wellhead_flow;  // kg/s
  std::vector<std::vector<double>> storage_bottomhole_flow;  // kg/s
  std::vector<std::vector<double>> storage_reservoir_pressure;  // Pa
  std::vector<std::vector<double>> storage_reservoir_mass;      // kg
  std::vector<std::vector<double>> storage_wellhead_pressure;   // Pa

  int steps() const { return int(hours.size()); }
};

/// Linepack of one original pipe in kg, from a density-by-seg-junction
/// accessor (trapezoid over the segment endpoints).
template <class RhoFn>
double pipe_linepack_kg(const AugmentedNetwork& aug, int pipe, RhoFn&& rho) {
  double m = 0.0;
  for (int sp : aug.pipe_segments[pipe]) {
    const SegPipe& s = aug.pipes[sp];
    m += s.area * s.length_nd * 0.5 * (rho(s.from) + rho(s.to));
  }
  return m * aug.scales.mass0();
}

/// Maps an NLP solution vector back to physical units on the hourly grid.
/// The trailing row repeats node 0 at t = T so a full period is listed
/// explicitly; periodic variables show identical first and last rows while
/// the reservoir column shows its actual end-of-period state (wrapped from
/// the interval equations, i.e. row 0's value advanced by the last step).
inline Trajectory extract_trajectory(const TranscribedNlp& nlp,
                                     const Eigen::VectorXd& x) {
  const AugmentedNetwork& aug = nlp.network();
  const ScaleSet& sc = aug.scales;
  const double p0 = sc.nominal_pressure;
  const double mf0 = sc.mass_flow0();
  const double w0 = sc.work0();
  const int N = nlp.num_nodes();
  const int J = aug.num_original_junctions;
  const int P = int(aug.pipe_segments.size());
  const int C = int(aug.compressors.size());
  const int T = int(aug.transfers.size());
  const int S = int(aug.storages.size());

  Trajectory tr;
  const int rows = N + 1;
  tr.hours.resize(rows);
  auto grid = [&](auto& field, int cols) {
    field.assign(rows, std::vector<double>(cols, 0.0));
  };
  grid(tr.junction_pressure, J);
  grid(tr.pipe_inflow, P);
  grid(tr.pipe_outflow, P);
  grid(tr.compressor_ratio, C);
  grid(tr.compressor_flow, C);
  grid(tr.compressor_power, C);
  grid(tr.transfer_flow, T);
  grid(tr.pipe_linepack, int(aug.pipe_segments.size()));
  grid(tr.slack_makeup, int(aug.slack_junctions.size()));
  grid(tr.storage_ratio, S);
  grid(tr.storage_surface_flow, S);
  grid(tr.storage_wellhead_flow, S);
  grid(tr.storage_bottomhole_flow, S);
  grid(tr.storage_reservoir_pressure, S);
  grid(tr.storage_reservoir_mass, S);
  grid(tr.storage_wellhead_pressure, S);

  for (int row = 0; row < rows; ++row) {
    const int k = row % N;
    tr.hours[row] = row * nlp.dt_hours();
    for (int j = 0; j < J; ++j) {
      tr.junction_pressure[row][j] = x[nlp.rho_index(k, j)] * p0;
    }
    for (int p = 0; p < P; ++p) {
      const auto& segs = aug.pipe_segments[p];
      const SegPipe& first = aug.pipes[segs.front()];
      const SegPipe& last = aug.pipes[segs.back()];
      tr.pipe_inflow[row][p] =
          x[nlp.pipe_var(k, segs.front(), 2)] * first.area * sc.flux0();
      tr.pipe_outflow[row][p] =
          x[nlp.pipe_var(k, segs.back(), 3)] * last.area * sc.flux0();
    }
    for (int c = 0; c < C; ++c) {
      double alpha = x[nlp.comp_var(k, c, 0)];
      double flow = x[nlp.comp_var(k, c, 1)];
      double work = x[nlp.comp_var(k, c, 2)];
      tr.compressor_ratio[row][c] = alpha;
      tr.compressor_flow[row][c] = flow * mf0;
      tr.compressor_power[row][c] = work * flow * w0 * mf0;
    }
    for (int t = 0; t < T; ++t) {
      tr.transfer_flow[row][t] = x[nlp.transfer_var(k, t)] * mf0;
    }
    for (std::size_t p = 0; p < aug.pipe_segments.size(); ++p) {
      tr.pipe_linepack[row][p] = pipe_linepack_kg(
          aug, int(p), [&](int j) { return x[nlp.rho_index(k, j)]; });
    }
    for (int s = 0; s < S; ++s) {
      const SegStorage& st = aug.storages[s];
      double rho_res = x[nlp.storage_var(k, s, 1)];
      if (row == N) {
        // reservoir state is not periodic: advance the final interval
        rho_res = x[nlp.storage_var(N - 1, s, 1)] +
                  nlp.dt_nd() / st.volume_nd * x[nlp.storage_var(N - 1, s, 2)];
      }
      tr.storage_ratio[row][s] = x[nlp.storage_var(k, s, 0)];
      tr.storage_reservoir_pressure[row][s] = rho_res * p0;
      tr.storage_reservoir_mass[row][s] = rho_res * st.volume_nd * sc.mass0();
      tr.storage_bottomhole_flow[row][s] = x[nlp.storage_var(k, s, 2)] * mf0;
      tr.storage_wellhead_flow[row][s] = x[nlp.storage_var(k, s, 3)] * mf0;
      tr.storage_surface_flow[row][s] = x[nlp.storage_var(k, s, 4)] * mf0;
      tr.storage_wellhead_pressure[row][s] = x[nlp.rho_index(k, st.wellhead)] * p0;
    }
  }
  return tr;
}

}  // namespace gasflow
