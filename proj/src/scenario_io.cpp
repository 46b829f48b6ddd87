#include "satmig/scenario_io.hpp"

#include <fstream>

#include "satmig/errors.hpp"

namespace satmig {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json* child(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

template <typename T>
T value_or(const json& obj, const std::string& key, const std::string& path, T fallback) {
  const json* v = child(obj, key);
  if (!v || v->is_null()) return fallback;
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v->is_number()) throw ConfigError(join(path, key) + ": expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer() && !v->is_number_unsigned())
        throw ConfigError(join(path, key) + ": expected an integer");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v->is_string()) throw ConfigError(join(path, key) + ": expected a string");
    }
    return v->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(join(path, key) + ": " + e.what());
  }
}

template <typename T>
T required(const json& obj, const std::string& key, const std::string& path) {
  const json* v = child(obj, key);
  if (!v || v->is_null()) throw ConfigError(join(path, key) + ": required field is missing");
  return value_or<T>(obj, key, path, T{});
}

const json& section(const json& doc, const std::string& key, const std::string& path, const json& empty) {
  const json* v = child(doc, key);
  if (!v || v->is_null()) return empty;
  if (!v->is_object()) throw ConfigError(join(path, key) + ": expected an object");
  return *v;
}

ProfileRange range_or(const json& obj, const std::string& key, const std::string& path, ProfileRange fallback) {
  const json* v = child(obj, key);
  if (!v || v->is_null()) return fallback;
  if (v->is_number()) return {v->get<double>(), v->get<double>()};
  if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
    throw ConfigError(join(path, key) + ": expected [lo, hi] or a number");
  return {(*v)[0].get<double>(), (*v)[1].get<double>()};
}

KindRanges parse_kind(const json& obj, const std::string& path, const KindRanges& d) {
  KindRanges k;
  k.packet_bits = range_or(obj, "packet_bits", path, d.packet_bits);
  k.max_delay_s = range_or(obj, "max_delay_s", path, d.max_delay_s);
  k.min_compute = range_or(obj, "min_compute", path, d.min_compute);
  k.migration_cost_weight = range_or(obj, "migration_cost_weight", path, d.migration_cost_weight);
  k.service_utility_weight = range_or(obj, "service_utility_weight", path, d.service_utility_weight);
  k.arrival_rate_pps = range_or(obj, "arrival_rate_pps", path, d.arrival_rate_pps);
  return k;
}

json range_json(const ProfileRange& r) { return json::array({r.lo, r.hi}); }

json kind_json(const KindRanges& k) {
  return {{"packet_bits", range_json(k.packet_bits)},
          {"max_delay_s", range_json(k.max_delay_s)},
          {"min_compute", range_json(k.min_compute)},
          {"migration_cost_weight", range_json(k.migration_cost_weight)},
          {"service_utility_weight", range_json(k.service_utility_weight)},
          {"arrival_rate_pps", range_json(k.arrival_rate_pps)}};
}

GeodeticPoint parse_point(const json& obj, const std::string& path) {
  return {required<double>(obj, "lat_deg", path), required<double>(obj, "lon_deg", path),
          value_or<double>(obj, "alt_km", path, 0.0)};
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario: expected a JSON object at the top level");
  const json empty = json::object();
  Scenario s;
  s.name = value_or<std::string>(doc, "name", "", "");

  const json& c = section(doc, "constellation", "", empty);
  auto& cc = s.constellation;
  const ConstellationConfig dc;
  cc.num_satellites = value_or<int>(c, "num_satellites", "constellation", dc.num_satellites);
  cc.altitude_km = value_or<double>(c, "altitude_km", "constellation", dc.altitude_km);
  cc.inclination_deg = value_or<double>(c, "inclination_deg", "constellation", dc.inclination_deg);
  const double default_spacing = cc.num_satellites > 0 ? 360.0 / cc.num_satellites : dc.raan_spacing_deg;
  cc.raan_spacing_deg = value_or<double>(c, "raan_spacing_deg", "constellation", default_spacing);
  cc.phasing_factor = value_or<double>(c, "phasing_factor", "constellation", dc.phasing_factor);
  cc.epoch_gmst_deg = value_or<double>(c, "epoch_gmst_deg", "constellation", dc.epoch_gmst_deg);
  cc.earth_radius_km = value_or<double>(c, "earth_radius_km", "constellation", dc.earth_radius_km);
  cc.mu_earth_km3s2 = value_or<double>(c, "mu_earth_km3s2", "constellation", dc.mu_earth_km3s2);
  cc.earth_rotation_rad_s = value_or<double>(c, "earth_rotation_rad_s", "constellation", dc.earth_rotation_rad_s);

  const json& l = section(doc, "link_budget", "", empty);
  auto& lb = s.link_budget;
  const LinkBudgetParams dl;
  lb.p_tx_w = value_or<double>(l, "p_tx_w", "link_budget", dl.p_tx_w);
  lb.g_tx = value_or<double>(l, "g_tx", "link_budget", dl.g_tx);
  lb.l_tx = value_or<double>(l, "l_tx", "link_budget", dl.l_tx);
  lb.g_rx = value_or<double>(l, "g_rx", "link_budget", dl.g_rx);
  lb.f_rx_k = value_or<double>(l, "f_rx_k", "link_budget", dl.f_rx_k);
  lb.boltzmann_j_per_k = value_or<double>(l, "boltzmann_j_per_k", "link_budget", dl.boltzmann_j_per_k);
  lb.w_rf_hz = value_or<double>(l, "w_rf_hz", "link_budget", dl.w_rf_hz);
  lb.carrier_hz = value_or<double>(l, "carrier_hz", "link_budget", dl.carrier_hz);
  lb.total_bandwidth_hz = value_or<double>(l, "total_bandwidth_hz", "link_budget", dl.total_bandwidth_hz);
  lb.gamma_th = value_or<double>(l, "gamma_th", "link_budget", dl.gamma_th);

  const json& r = section(doc, "rain", "", empty);
  const RainModel dr;
  s.rain.alpha = value_or<double>(r, "alpha", "rain", dr.alpha);
  s.rain.beta = value_or<double>(r, "beta", "rain", dr.beta);
  s.rain.rain_rate_mm_h = value_or<double>(r, "rain_rate_mm_h", "rain", dr.rain_rate_mm_h);
  s.rain.antenna_height_km = value_or<double>(r, "antenna_height_km", "rain", dr.antenna_height_km);
  s.rain.effective_earth_radius_km =
      value_or<double>(r, "effective_earth_radius_km", "rain", dr.effective_earth_radius_km);

  const json& e = section(doc, "env", "", empty);
  auto& ec = s.env;
  const EnvConfig de;
  ec.num_slots = value_or<int>(e, "num_slots", "env", de.num_slots);
  ec.slot_seconds = value_or<double>(e, "slot_seconds", "env", de.slot_seconds);
  ec.theta_min_deg = value_or<double>(e, "theta_min_deg", "env", de.theta_min_deg);
  ec.max_beams = value_or<int>(e, "max_beams", "env", de.max_beams);
  ec.bandwidth_cap = value_or<double>(e, "bandwidth_cap", "env", de.bandwidth_cap);
  ec.compute_cap = value_or<double>(e, "compute_cap", "env", de.compute_cap);
  ec.penalty_weight = value_or<double>(e, "penalty_weight", "env", de.penalty_weight);
  const json& pw = section(e, "penalty_weights", "env", empty);
  ec.penalty_weights.beam = value_or<double>(pw, "beam", "env.penalty_weights", de.penalty_weights.beam);
  ec.penalty_weights.bandwidth =
      value_or<double>(pw, "bandwidth", "env.penalty_weights", de.penalty_weights.bandwidth);
  ec.penalty_weights.compute = value_or<double>(pw, "compute", "env.penalty_weights", de.penalty_weights.compute);
  ec.penalty_weights.visibility =
      value_or<double>(pw, "visibility", "env.penalty_weights", de.penalty_weights.visibility);
  ec.app_update_cost = value_or<double>(e, "app_update_cost", "env", de.app_update_cost);
  ec.seed = value_or<std::uint64_t>(e, "seed", "env", de.seed);

  const json* clusters = child(doc, "clusters");
  if (!clusters || clusters->is_null()) throw ConfigError("clusters: required field is missing");
  if (!clusters->is_array()) throw ConfigError("clusters: expected an array");
  for (std::size_t i = 0; i < clusters->size(); ++i) {
    const std::string path = "clusters[" + std::to_string(i) + "]";
    const json& item = (*clusters)[i];
    if (!item.is_object()) throw ConfigError(path + ": expected an object");
    GroundCluster g;
    g.name = value_or<std::string>(item, "name", path, "cluster-" + std::to_string(i));
    g.location = parse_point(item, path);
    g.population = required<double>(item, "population", path);
    s.clusters.push_back(std::move(g));
  }

  if (const json* flights = child(doc, "flights"); flights && !flights->is_null()) {
    if (!flights->is_array()) throw ConfigError("flights: expected an array");
    for (std::size_t i = 0; i < flights->size(); ++i) {
      const std::string path = "flights[" + std::to_string(i) + "]";
      const json& item = (*flights)[i];
      if (!item.is_object()) throw ConfigError(path + ": expected an object");
      FlightPlan f;
      f.flight_id = value_or<int>(item, "flight_id", path, static_cast<int>(i));
      f.name = value_or<std::string>(item, "name", path, "flight-" + std::to_string(i));
      f.cruise_floor_km = value_or<double>(item, "cruise_floor_km", path, f.cruise_floor_km);
      f.climb_rate_threshold_km_s =
          value_or<double>(item, "climb_rate_threshold_km_s", path, f.climb_rate_threshold_km_s);
      const json* wps = child(item, "waypoints");
      if (!wps || !wps->is_array()) throw ConfigError(path + ".waypoints: required array is missing");
      for (std::size_t j = 0; j < wps->size(); ++j) {
        const std::string wpath = path + ".waypoints[" + std::to_string(j) + "]";
        const json& w = (*wps)[j];
        if (!w.is_object()) throw ConfigError(wpath + ": expected an object");
        f.waypoints.push_back({required<double>(w, "t_s", wpath), parse_point(w, wpath)});
      }
      s.flights.push_back(std::move(f));
    }
  }

  const json& pr = section(doc, "profile_ranges", "", empty);
  const ProfileRanges dp;
  s.profile_ranges.lambda0_pps = value_or<double>(pr, "lambda0_pps", "profile_ranges", dp.lambda0_pps);
  s.profile_ranges.ground =
      parse_kind(section(pr, "ground", "profile_ranges", empty), "profile_ranges.ground", dp.ground);
  s.profile_ranges.flight =
      parse_kind(section(pr, "flight", "profile_ranges", empty), "profile_ranges.flight", dp.flight);

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario: cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario: parse error in '" + path.string() + "': " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const Scenario& s) {
  const auto& c = s.constellation;
  const auto& l = s.link_budget;
  const auto& e = s.env;
  json doc;
  doc["name"] = s.name;
  doc["constellation"] = {{"num_satellites", c.num_satellites},     {"altitude_km", c.altitude_km},
                          {"inclination_deg", c.inclination_deg},   {"raan_spacing_deg", c.raan_spacing_deg},
                          {"phasing_factor", c.phasing_factor},     {"epoch_gmst_deg", c.epoch_gmst_deg},
                          {"earth_radius_km", c.earth_radius_km},   {"mu_earth_km3s2", c.mu_earth_km3s2},
                          {"earth_rotation_rad_s", c.earth_rotation_rad_s}};
  doc["link_budget"] = {{"p_tx_w", l.p_tx_w},
                        {"g_tx", l.g_tx},
                        {"l_tx", l.l_tx},
                        {"g_rx", l.g_rx},
                        {"f_rx_k", l.f_rx_k},
                        {"boltzmann_j_per_k", l.boltzmann_j_per_k},
                        {"w_rf_hz", l.w_rf_hz},
                        {"carrier_hz", l.carrier_hz},
                        {"total_bandwidth_hz", l.total_bandwidth_hz},
                        {"gamma_th", l.gamma_th}};
  doc["rain"] = {{"alpha", s.rain.alpha},
                 {"beta", s.rain.beta},
                 {"rain_rate_mm_h", s.rain.rain_rate_mm_h},
                 {"antenna_height_km", s.rain.antenna_height_km},
                 {"effective_earth_radius_km", s.rain.effective_earth_radius_km}};
  doc["env"] = {{"num_slots", e.num_slots},
                {"slot_seconds", e.slot_seconds},
                {"theta_min_deg", e.theta_min_deg},
                {"max_beams", e.max_beams},
                {"bandwidth_cap", e.bandwidth_cap},
                {"compute_cap", e.compute_cap},
                {"penalty_weight", e.penalty_weight},
                {"penalty_weights",
                 {{"beam", e.penalty_weights.beam},
                  {"bandwidth", e.penalty_weights.bandwidth},
                  {"compute", e.penalty_weights.compute},
                  {"visibility", e.penalty_weights.visibility}}},
                {"app_update_cost", e.app_update_cost},
                {"seed", e.seed}};
  doc["clusters"] = json::array();
  for (const auto& g : s.clusters)
    doc["clusters"].push_back({{"name", g.name},
                               {"lat_deg", g.location.lat_deg},
                               {"lon_deg", g.location.lon_deg},
                               {"alt_km", g.location.alt_km},
                               {"population", g.population}});
  doc["flights"] = json::array();
  for (const auto& f : s.flights) {
    json wps = json::array();
    for (const auto& w : f.waypoints)
      wps.push_back({{"t_s", w.time_s}, {"lat_deg", w.point.lat_deg}, {"lon_deg", w.point.lon_deg},
                     {"alt_km", w.point.alt_km}});
    doc["flights"].push_back({{"flight_id", f.flight_id},
                              {"name", f.name},
                              {"cruise_floor_km", f.cruise_floor_km},
                              {"climb_rate_threshold_km_s", f.climb_rate_threshold_km_s},
                              {"waypoints", std::move(wps)}});
  }
  doc["profile_ranges"] = {{"lambda0_pps", s.profile_ranges.lambda0_pps},
                           {"ground", kind_json(s.profile_ranges.ground)},
                           {"flight", kind_json(s.profile_ranges.flight)}};
  return doc;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("scenario: cannot write '" + path.string() + "'");
  out << to_json(scenario).dump(2) << '\n';
}

}  // namespace satmig
