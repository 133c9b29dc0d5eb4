#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gasflow/network.hpp"

namespace gasflow {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

namespace detail {

using nlohmann::json;

inline double parse_pressure_scalar(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_object()) {
    if (v.contains("psi")) return units::psi_to_pa(v.at("psi").get<double>());
    if (v.contains("mpa")) return v.at("mpa").get<double>() * 1.0e6;
    if (v.contains("pa")) return v.at("pa").get<double>();
    throw ParseError(where, "pressure object needs one of pa/psi/mpa");
  }
  throw ParseError(where, "expected a pressure (number in Pa or {psi:...}/{mpa:...})");
}

inline TimeSeries parse_series(const json& doc, const json& v, const std::string& where,
                               double unit_factor = 1.0) {
  if (v.is_number()) return TimeSeries::constant(v.get<double>() * unit_factor);
  if (v.is_string()) {
    const std::string name = v.get<std::string>();
    if (!doc.contains("time_series") || !doc.at("time_series").contains(name))
      throw ParseError(where, "references undefined time series '" + name + "'");
    return parse_series(doc, doc.at("time_series").at(name), where + "/" + name, unit_factor);
  }
  if (v.is_array()) {
    TimeSeries s;
    for (const auto& p : v) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw ParseError(where, "series breakpoints must be [hour, value] pairs");
      try {
        s.add(p[0].get<double>(), p[1].get<double>() * unit_factor);
      } catch (const std::invalid_argument& e) {
        throw ParseError(where, e.what());
      }
    }
    if (s.empty()) throw ParseError(where, "series must have at least one breakpoint");
    return s;
  }
  throw ParseError(where, "expected a number, series name, or breakpoint array");
}

inline TimeSeries parse_pressure_series(const json& doc, const json& v,
                                        const std::string& where) {
  if (v.is_number() || (v.is_object() && !v.contains("points")))
    return TimeSeries::constant(parse_pressure_scalar(v, where));
  if (v.is_object()) {
    double factor = 1.0;
    if (v.contains("unit")) {
      const std::string u = v.at("unit").get<std::string>();
      if (u == "psi") factor = units::kPsiToPa;
      else if (u == "mpa") factor = 1.0e6;
      else if (u != "pa") throw ParseError(where, "unknown pressure unit '" + u + "'");
    }
    return parse_series(doc, v.at("points"), where, factor);
  }
  return parse_series(doc, v, where);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (j.contains(key)) return j.at(key).get<T>();
  return fallback;
}

inline std::string require_id(const json& j, const std::string& where) {
  if (!j.contains("id")) throw ParseError(where, "missing id");
  return j.at("id").get<std::string>();
}

}  // namespace detail

inline NetworkModel parse_network(const nlohmann::json& doc) {
  using detail::get_or;
  using nlohmann::json;
  NetworkModel net;
  net.name = get_or<std::string>(doc, "name", "network");

  if (doc.contains("params")) {
    const json& p = doc.at("params");
    net.horizon_hours = get_or(p, "horizon_hours", 24.0);
    net.scales.sound_speed = get_or(p, "sound_speed", net.scales.sound_speed);
    net.scales.nominal_length = get_or(p, "nominal_length", net.scales.nominal_length);
    if (p.contains("nominal_pressure"))
      net.scales.nominal_pressure =
          detail::parse_pressure_scalar(p.at("nominal_pressure"), "params/nominal_pressure");
    net.gas.gamma = get_or(p, "gamma", net.gas.gamma);
    net.gas.gas_gravity = get_or(p, "gas_gravity", net.gas.gas_gravity);
    net.gas.temperature = get_or(p, "temperature", net.gas.temperature);
  }

  for (const json& jj : doc.value("junctions", json::array())) {
    Junction j;
    j.id = detail::require_id(jj, "junctions");
    if (jj.contains("p_min")) j.p_min = detail::parse_pressure_scalar(jj.at("p_min"), j.id);
    if (jj.contains("p_max")) j.p_max = detail::parse_pressure_scalar(jj.at("p_max"), j.id);
    j.slack = get_or(jj, "slack", false);
    if (jj.contains("slack_pressure"))
      j.slack_pressure = detail::parse_pressure_series(doc, jj.at("slack_pressure"), j.id);
    net.junctions.push_back(std::move(j));
  }

  for (const json& jp : doc.value("pipes", json::array())) {
    Pipe p;
    p.id = detail::require_id(jp, "pipes");
    p.from = jp.value("from", "");
    p.to = jp.value("to", "");
    p.length = get_or(jp, "length", 0.0);
    p.diameter = get_or(jp, "diameter", 0.0);
    p.friction = get_or(jp, "friction", 0.01);
    p.theta_deg = get_or(jp, "theta_deg", 0.0);
    if (jp.contains("g_parallel")) {
      p.has_g_parallel_override = true;
      p.g_parallel_override = jp.at("g_parallel").get<double>();
    }
    p.flux_max = get_or(jp, "flux_max", p.flux_max);
    net.pipes.push_back(std::move(p));
  }

  for (const json& jc : doc.value("compressors", json::array())) {
    Compressor c;
    c.id = detail::require_id(jc, "compressors");
    c.from = jc.value("from", "");
    c.to = jc.value("to", "");
    const std::string type = jc.value("type", "unidirectional");
    if (type == "unidirectional") {
      c.type = CompressorType::Unidirectional;
    } else if (type == "bidirectional") {
      c.type = CompressorType::BidirectionalReverse;
    } else {
      throw ParseError(c.id, "compressor type must be unidirectional or bidirectional");
    }
    c.alpha_max = get_or(jc, "alpha_max", c.alpha_max);
    c.flow_max = get_or(jc, "flow_max", c.flow_max);
    c.power_max = get_or(jc, "power_max", c.power_max);
    net.compressors.push_back(std::move(c));
  }

  for (const json& js : doc.value("storages", json::array())) {
    Storage s;
    s.id = detail::require_id(js, "storages");
    s.junction = js.value("junction", "");
    s.reservoir_volume = get_or(js, "reservoir_volume", 0.0);
    s.mass_min = get_or(js, "mass_min", 0.0);
    s.mass_max = get_or(js, "mass_max", 0.0);
    s.mass_initial = get_or(js, "mass_initial", 0.0);
    s.well_length = get_or(js, "well_length", s.well_length);
    s.well_diameter = get_or(js, "well_diameter", s.well_diameter);
    s.well_friction = get_or(js, "well_friction", s.well_friction);
    s.regulator_alpha_max = get_or(js, "regulator_alpha_max", s.regulator_alpha_max);
    s.flow_max = get_or(js, "flow_max", s.flow_max);
    if (js.contains("wellhead_p_min"))
      s.wellhead_p_min = detail::parse_pressure_scalar(js.at("wellhead_p_min"), s.id);
    if (js.contains("wellhead_p_max"))
      s.wellhead_p_max = detail::parse_pressure_scalar(js.at("wellhead_p_max"), s.id);
    s.well_flux_max = get_or(js, "well_flux_max", 0.0);
    net.storages.push_back(std::move(s));
  }

  auto parse_transfer = [&](const json& jt, TransferKind kind) {
    TransferPoint t;
    t.id = detail::require_id(jt, kind == TransferKind::Receipt ? "receipts" : "deliveries");
    t.junction = jt.value("junction", "");
    t.kind = kind;
    if (jt.contains("price")) t.price = detail::parse_series(doc, jt.at("price"), t.id);
    if (jt.contains("max_flow")) t.max_flow = detail::parse_series(doc, jt.at("max_flow"), t.id);
    if (jt.contains("min_flow")) t.min_flow = detail::parse_series(doc, jt.at("min_flow"), t.id);
    if (t.min_flow.empty()) t.min_flow = TimeSeries::constant(0.0);
    net.transfers.push_back(std::move(t));
  };
  for (const json& jt : doc.value("receipts", json::array()))
    parse_transfer(jt, TransferKind::Receipt);
  for (const json& jt : doc.value("deliveries", json::array()))
    parse_transfer(jt, TransferKind::Delivery);

  return net;
}

inline NetworkModel load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  return parse_network(doc);
}

inline nlohmann::json serialize_series(const TimeSeries& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [h, v] : s.points()) arr.push_back({h, v});
  return arr;
}

inline nlohmann::json serialize_network(const NetworkModel& net) {
  using nlohmann::json;
  json doc;
  doc["name"] = net.name;
  doc["params"] = {{"horizon_hours", net.horizon_hours},
                   {"sound_speed", net.scales.sound_speed},
                   {"nominal_pressure", net.scales.nominal_pressure},
                   {"nominal_length", net.scales.nominal_length},
                   {"gamma", net.gas.gamma},
                   {"gas_gravity", net.gas.gas_gravity},
                   {"temperature", net.gas.temperature}};
  doc["junctions"] = json::array();
  for (const auto& j : net.junctions) {
    json jj = {{"id", j.id}, {"p_min", j.p_min}, {"p_max", j.p_max}};
    if (j.slack) {
      jj["slack"] = true;
      jj["slack_pressure"] = serialize_series(j.slack_pressure);
    }
    doc["junctions"].push_back(jj);
  }
  doc["pipes"] = json::array();
  for (const auto& p : net.pipes) {
    json jp = {{"id", p.id},       {"from", p.from},         {"to", p.to},
               {"length", p.length}, {"diameter", p.diameter}, {"friction", p.friction},
               {"flux_max", p.flux_max}};
    if (p.theta_deg != 0.0) jp["theta_deg"] = p.theta_deg;
    if (p.has_g_parallel_override) jp["g_parallel"] = p.g_parallel_override;
    doc["pipes"].push_back(jp);
  }
  doc["compressors"] = json::array();
  for (const auto& c : net.compressors) {
    doc["compressors"].push_back(
        {{"id", c.id},
         {"from", c.from},
         {"to", c.to},
         {"type", c.type == CompressorType::Unidirectional ? "unidirectional" : "bidirectional"},
         {"alpha_max", c.alpha_max},
         {"flow_max", c.flow_max},
         {"power_max", c.power_max}});
  }
  doc["storages"] = json::array();
  for (const auto& s : net.storages) {
    json js = {{"id", s.id},
               {"junction", s.junction},
               {"reservoir_volume", s.reservoir_volume},
               {"mass_min", s.mass_min},
               {"mass_max", s.mass_max},
               {"mass_initial", s.mass_initial},
               {"well_length", s.well_length},
               {"well_diameter", s.well_diameter},
               {"well_friction", s.well_friction},
               {"regulator_alpha_max", s.regulator_alpha_max},
               {"flow_max", s.flow_max},
               {"wellhead_p_min", s.wellhead_p_min},
               {"wellhead_p_max", s.wellhead_p_max}};
    if (s.well_flux_max > 0) js["well_flux_max"] = s.well_flux_max;
    doc["storages"].push_back(js);
  }
  doc["receipts"] = json::array();
  doc["deliveries"] = json::array();
  for (const auto& t : net.transfers) {
    json jt = {{"id", t.id},
               {"junction", t.junction},
               {"price", serialize_series(t.price)},
               {"max_flow", serialize_series(t.max_flow)},
               {"min_flow", serialize_series(t.min_flow)}};
    if (t.kind == TransferKind::Receipt)
      doc["receipts"].push_back(jt);
    else
      doc["deliveries"].push_back(jt);
  }
  doc["time_series"] = json::object();
  return doc;
}

}  // namespace gasflow
