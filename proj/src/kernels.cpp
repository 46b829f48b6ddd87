#include "satmig/kernels.hpp"

#include <stdexcept>

#include "satmig/queueing.hpp"

namespace satmig {

namespace {

// Below this many work items the OpenMP region costs more than it saves.
constexpr long kParallelThreshold = 256;

GeometryTable make_table(std::size_t users, std::size_t sats) {
  GeometryTable t;
  t.num_users = static_cast<int>(users);
  t.num_sats = static_cast<int>(sats);
  t.elevation_deg.assign(users * sats, 0.0);
  t.range_km.assign(users * sats, 0.0);
  return t;
}

inline void fill_cell(GeometryTable& t, const ConstellationConfig& config, const SatelliteState& sat,
                      const GeodeticPoint& user, std::size_t idx) {
  t.elevation_deg[idx] = elevation_angle(sat, user, config);
  t.range_km[idx] = slant_range_km(sat, user, config);
}

}  // namespace

LinkResult evaluate_link(const LinkRequest& req, const LinkBudgetParams& params, const RainModel& rain,
                         double slot_seconds) {
  LinkResult r;
  const double gain =
      propagation_gain(params, rain, req.range_km, req.elevation_deg, req.user_lat_deg, req.user_alt_km);
  r.snr = snr(params, gain);
  r.rate_bps = data_rate(req.bandwidth_ratio, params, r.snr);
  r.service_rate_pps = service_rate(r.rate_bps, req.packet_bits);
  r.success_prob = delay_success_prob(req.arrival_rate_pps, r.service_rate_pps, req.max_delay_s);
  r.served_bits = served_bits(req.arrival_rate_pps, slot_seconds, req.packet_bits, r.success_prob);
  return r;
}

namespace serial {

GeometryTable compute_geometry(const ConstellationConfig& config, std::span<const SatelliteState> sats,
                               std::span<const GeodeticPoint> users) {
  GeometryTable t = make_table(users.size(), sats.size());
  for (std::size_t u = 0; u < users.size(); ++u)
    for (std::size_t s = 0; s < sats.size(); ++s) fill_cell(t, config, sats[s], users[u], u * sats.size() + s);
  return t;
}

void evaluate_links(std::span<const LinkRequest> requests, std::span<LinkResult> results,
                    const LinkBudgetParams& params, const RainModel& rain, double slot_seconds) {
  if (requests.size() != results.size()) throw std::invalid_argument("evaluate_links: size mismatch");
  for (std::size_t i = 0; i < requests.size(); ++i) results[i] = evaluate_link(requests[i], params, rain, slot_seconds);
}

}  // namespace serial

namespace omp {

GeometryTable compute_geometry(const ConstellationConfig& config, std::span<const SatelliteState> sats,
                               std::span<const GeodeticPoint> users) {
  GeometryTable t = make_table(users.size(), sats.size());
  const long n_sats = static_cast<long>(sats.size());
  const long cells = static_cast<long>(users.size()) * n_sats;
#pragma omp parallel for schedule(static) if (cells >= kParallelThreshold)
  for (long i = 0; i < cells; ++i) {
    const auto u = static_cast<std::size_t>(i / n_sats);
    const auto s = static_cast<std::size_t>(i % n_sats);
    fill_cell(t, config, sats[s], users[u], static_cast<std::size_t>(i));
  }
  return t;
}

void evaluate_links(std::span<const LinkRequest> requests, std::span<LinkResult> results,
                    const LinkBudgetParams& params, const RainModel& rain, double slot_seconds) {
  if (requests.size() != results.size()) throw std::invalid_argument("evaluate_links: size mismatch");
  const long n = static_cast<long>(requests.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    results[k] = evaluate_link(requests[k], params, rain, slot_seconds);
  }
}

}  // namespace omp

}  // namespace satmig
