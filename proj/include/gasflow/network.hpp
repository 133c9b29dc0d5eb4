#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "gasflow/nondim.hpp"
#include "gasflow/time_series.hpp"
#include "gasflow/units.hpp"

namespace gasflow {

struct Junction {
  std::string id;
  double p_min = 3.0e6;  // Pa
  double p_max = 6.0e6;  // Pa
  bool slack = false;
  TimeSeries slack_pressure;  // Pa, required when slack
};

struct Pipe {
  std::string id;
  std::string from, to;
  double length = 0.0;    // m
  double diameter = 0.0;  // m
  double friction = 0.01; // Darcy friction factor
  /// Inclination of the axis in degrees, positive when rising from `from`
  /// to `to`. The gravity component along the axis is g_par = -g sin(theta)
  /// unless overridden explicitly.
  double theta_deg = 0.0;
  bool has_g_parallel_override = false;
  double g_parallel_override = 0.0;
  /// Flux magnitude limit, kg/(m^2 s); 0 disables the bound.
  double flux_max = 500.0;

  double area() const { return std::numbers::pi * diameter * diameter / 4.0; }
  double g_parallel() const {
    if (has_g_parallel_override) return g_parallel_override;
    return -units::kGravity * std::sin(theta_deg * std::numbers::pi / 180.0);
  }
};

enum class CompressorType {
  Unidirectional,        // boosts i->j, flow f >= 0
  BidirectionalReverse,  // boosts i->j, reverse flow allowed uncompressed
};

struct Compressor {
  std::string id;
  std::string from, to;
  CompressorType type = CompressorType::Unidirectional;
  double alpha_max = 2.0;   // ratio bound, alpha in [1, alpha_max]
  double flow_max = 300.0;  // kg/s
  double power_max = 1.0e7; // W
};

struct Storage {
  std::string id;
  std::string junction;
  double reservoir_volume = 0.0;  // m^3
  double mass_min = 0.0;          // kg
  double mass_max = 0.0;          // kg
  double mass_initial = 0.0;      // kg
  double well_length = 1000.0;    // m
  double well_diameter = 0.3;     // m
  double well_friction = 0.01;
  double regulator_alpha_max = 2.0;  // alpha_s in [1/max, max]
  double flow_max = 300.0;           // |f_s| bound, kg/s
  double wellhead_p_min = units::psi_to_pa(250.0);   // Pa, all well junctions
  double wellhead_p_max = units::psi_to_pa(1500.0);  // Pa
  /// Flux magnitude limit inside the well, kg/(m^2 s); 0 derives a bound
  /// from flow_max and the well area.
  double well_flux_max = 0.0;

  double well_area() const {
    return std::numbers::pi * well_diameter * well_diameter / 4.0;
  }
};

enum class TransferKind { Receipt, Delivery };

/// A transfer point: receipt (injection into the network, f_r) or delivery
/// (off-take, f_d). Prices are $ per (kg/s) sustained for one hour;
/// receipt prices are <= 0 (payments), delivery prices >= 0 (revenue).
struct TransferPoint {
  std::string id;
  std::string junction;
  TransferKind kind = TransferKind::Delivery;
  TimeSeries price;      // $/(kg/s * h)
  TimeSeries max_flow;   // kg/s (nomination for deliveries)
  TimeSeries min_flow;   // kg/s, default 0
};

struct GasParams {
  double gamma = 1.4;            // specific heat ratio
  double gas_gravity = 0.6;      // G, relative to air
  double temperature = 288.7;    // K
};

struct ValidationFinding {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string entity;
  std::string message;
};

struct NetworkModel {
  std::string name;
  GasParams gas;
  ScaleSet scales;
  double horizon_hours = 24.0;

  std::vector<Junction> junctions;
  std::vector<Pipe> pipes;
  std::vector<Compressor> compressors;
  std::vector<Storage> storages;
  std::vector<TransferPoint> transfers;

  int junction_index(const std::string& id) const {
    for (std::size_t i = 0; i < junctions.size(); ++i)
      if (junctions[i].id == id) return int(i);
    return -1;
  }

  std::vector<ValidationFinding> validate() const;
  bool valid() const {
    for (const auto& f : validate())
      if (f.severity == ValidationFinding::Severity::Error) return false;
    return true;
  }
};

namespace detail {
class UnionFind {
public:
  explicit UnionFind(int n) : parent_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
  std::vector<int> parent_;
};
}  // namespace detail

inline std::vector<ValidationFinding> NetworkModel::validate() const {
  std::vector<ValidationFinding> out;
  auto error = [&](const std::string& entity, const std::string& msg) {
    out.push_back({ValidationFinding::Severity::Error, entity, msg});
  };
  auto warning = [&](const std::string& entity, const std::string& msg) {
    out.push_back({ValidationFinding::Severity::Warning, entity, msg});
  };

  if (horizon_hours <= 0) error("params", "horizon_hours must be positive");
  if (scales.sound_speed <= 0) error("params", "sound_speed must be positive");
  if (scales.nominal_pressure <= 0) error("params", "nominal_pressure must be positive");
  if (scales.nominal_length <= 0) error("params", "nominal_length must be positive");
  if (gas.gamma <= 1.0) error("params", "gamma must exceed 1");
  if (gas.gas_gravity <= 0) error("params", "gas_gravity must be positive");
  if (gas.temperature <= 0) error("params", "temperature must be positive");

  std::map<std::string, int> seen;
  int num_slack = 0;
  for (const auto& j : junctions) {
    if (++seen[j.id] > 1) error(j.id, "duplicate junction id");
    if (j.p_min <= 0) error(j.id, "p_min must be positive");
    if (j.p_min > j.p_max) error(j.id, "p_min exceeds p_max");
    if (j.slack) {
      ++num_slack;
      if (j.slack_pressure.empty()) {
        error(j.id, "slack junction needs a slack_pressure profile");
      } else {
        if (j.slack_pressure.start_hour() > 0.0)
          error(j.id, "slack_pressure profile must cover hour 0");
        if (j.slack_pressure.min_value() < j.p_min ||
            j.slack_pressure.max_value() > j.p_max)
          warning(j.id, "slack_pressure leaves the junction pressure bounds");
      }
    }
  }
  if (num_slack == 0 && !junctions.empty())
    error("network", "at least one slack junction is required");

  auto check_endpoint = [&](const std::string& ent, const std::string& jid) {
    if (junction_index(jid) < 0) error(ent, "references unknown junction '" + jid + "'");
  };

  std::map<std::string, int> edge_seen;
  for (const auto& p : pipes) {
    if (++edge_seen[p.id] > 1) error(p.id, "duplicate edge id");
    check_endpoint(p.id, p.from);
    check_endpoint(p.id, p.to);
    if (p.from == p.to) error(p.id, "self-loop");
    if (p.length <= 0) error(p.id, "length must be positive");
    if (p.diameter <= 0) error(p.id, "diameter must be positive");
    if (p.friction <= 0) error(p.id, "friction must be positive");
    if (p.flux_max < 0) error(p.id, "flux_max must be nonnegative");
  }
  for (const auto& c : compressors) {
    if (++edge_seen[c.id] > 1) error(c.id, "duplicate edge id");
    check_endpoint(c.id, c.from);
    check_endpoint(c.id, c.to);
    if (c.from == c.to) error(c.id, "self-loop");
    if (c.alpha_max < 1.0) error(c.id, "alpha_max must be at least 1");
    if (c.flow_max <= 0) error(c.id, "flow_max must be positive");
    if (c.power_max <= 0) error(c.id, "power_max must be positive");
  }

  std::map<std::string, int> storage_seen;
  for (const auto& s : storages) {
    if (++storage_seen[s.id] > 1) error(s.id, "duplicate storage id");
    check_endpoint(s.id, s.junction);
    if (s.reservoir_volume <= 0) error(s.id, "reservoir_volume must be positive");
    if (s.mass_min < 0 || s.mass_min > s.mass_max)
      error(s.id, "mass bounds must satisfy 0 <= mass_min <= mass_max");
    if (s.mass_initial < s.mass_min || s.mass_initial > s.mass_max)
      error(s.id, "mass_initial outside [mass_min, mass_max]");
    if (s.well_length <= 0) error(s.id, "well_length must be positive");
    if (s.well_diameter <= 0) error(s.id, "well_diameter must be positive");
    if (s.well_friction <= 0) error(s.id, "well_friction must be positive");
    if (s.regulator_alpha_max < 1.0) error(s.id, "regulator_alpha_max must be at least 1");
    if (s.flow_max <= 0) error(s.id, "flow_max must be positive");
    if (s.wellhead_p_min <= 0 || s.wellhead_p_min > s.wellhead_p_max)
      error(s.id, "wellhead pressure bounds invalid");
  }

  std::map<std::string, int> transfer_seen;
  for (const auto& t : transfers) {
    if (++transfer_seen[t.id] > 1) error(t.id, "duplicate transfer id");
    check_endpoint(t.id, t.junction);
    for (const TimeSeries* s : {&t.price, &t.max_flow}) {
      if (s->empty()) {
        error(t.id, "price and max_flow profiles are required");
      } else if (s->start_hour() > 0.0) {
        error(t.id, "profile must cover hour 0");
      }
    }
    if (!t.max_flow.empty() && t.max_flow.min_value() < 0)
      error(t.id, "max_flow must be nonnegative");
    if (!t.min_flow.empty() && !t.max_flow.empty() &&
        t.min_flow.max_value() > t.max_flow.max_value())
      warning(t.id, "min_flow exceeds max_flow somewhere");
    if (!t.price.empty()) {
      if (t.kind == TransferKind::Delivery && t.price.min_value() < 0)
        error(t.id, "delivery prices must be nonnegative");
      if (t.kind == TransferKind::Receipt && t.price.max_value() > 0)
        error(t.id, "receipt prices must be nonpositive");
    }
  }

  // Connectivity over pipes + compressors (wells are internal to storages).
  if (!junctions.empty()) {
    detail::UnionFind uf(int(junctions.size()));
    auto unite_ids = [&](const std::string& a, const std::string& b) {
      int ia = junction_index(a), ib = junction_index(b);
      if (ia >= 0 && ib >= 0) uf.unite(ia, ib);
    };
    for (const auto& p : pipes) unite_ids(p.from, p.to);
    for (const auto& c : compressors) unite_ids(c.from, c.to);
    int root = uf.find(0);
    for (std::size_t i = 1; i < junctions.size(); ++i)
      if (uf.find(int(i)) != root) {
        error("network", "junction graph is not connected");
        break;
      }
  }

  return out;
}

}  // namespace gasflow
