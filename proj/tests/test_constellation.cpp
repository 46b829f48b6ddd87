#include <doctest.h>

#include <cstring>
#include <random>

#include "oracles.hpp"
#include "satmig/constellation.hpp"
#include "satmig/errors.hpp"
#include "satmig/scenario_io.hpp"

using namespace satmig;

namespace {

ConstellationConfig meo() { return ConstellationConfig{}; }

double rel(const Vec3& a, const Vec3& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("satellite 0 starts over the prime meridian on the equator") {
  const auto sats = propagate(meo(), 0, 300.0);
  REQUIRE(sats.size() == 8);
  CHECK(sats[0].position_ecef_km.x == doctest::Approx(6378.137 + 20184.0).epsilon(1e-12));
  CHECK(std::abs(sats[0].position_ecef_km.y) < 1e-9);
  CHECK(std::abs(sats[0].position_ecef_km.z) < 1e-9);
}

TEST_CASE("orbit radius is conserved at every slot") {
  const auto cfg = meo();
  const double r = cfg.orbit_radius_km();
  for (int slot = 0; slot < 200; ++slot)
    for (const auto& s : propagate(cfg, slot, 300.0)) CHECK(std::abs(s.position_ecef_km.norm() - r) / r < 1e-6);
}

TEST_CASE("orbital period from Kepler's third law") {
  CHECK(meo().orbital_period_s() == doctest::Approx(43082.96).epsilon(1e-6));
}

TEST_CASE("inertial position repeats after one period and matches a numerical two-body integration") {
  const auto cfg = meo();
  const double T = cfg.orbital_period_s();
  for (int k = 0; k < cfg.num_satellites; ++k) {
    const Vec3 p0 = inertial_position(cfg, k, 0.0);
    const Vec3 pT = inertial_position(cfg, k, T);
    CHECK(rel(pT, p0) < 1e-6);

    const auto s0 = oracle::circular_state(cfg.orbit_radius_km(), cfg.mu_earth_km3s2, cfg.inclination_deg,
                                           k * cfg.raan_spacing_deg, k * cfg.phasing_factor * 360.0 / 8);
    CHECK(rel({s0.r[0], s0.r[1], s0.r[2]}, p0) < 1e-12);
    const auto sT = oracle::two_body_rk4(s0, cfg.mu_earth_km3s2, 5000.0, 1.0);
    CHECK(rel({sT.r[0], sT.r[1], sT.r[2]}, inertial_position(cfg, k, 5000.0)) < 1e-6);
  }
}

TEST_CASE("propagation is deterministic") {
  const auto a = propagate(meo(), 17, 300.0);
  const auto b = propagate(meo(), 17, 300.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::memcmp(&a[i].position_ecef_km, &b[i].position_ecef_km, sizeof(Vec3)) == 0);
  }
}

TEST_CASE("propagate rejects bad arguments") {
  auto cfg = meo();
  CHECK_THROWS_AS(propagate(cfg, -1, 300.0), ConfigError);
  CHECK_THROWS_AS(propagate(cfg, 0, 0.0), ConfigError);
  cfg.altitude_km = -5.0;
  CHECK_THROWS_AS(propagate(cfg, 0, 300.0), ConfigError);
}

TEST_CASE("user at the sub-satellite point sees the satellite at exactly 90 degrees") {
  const auto cfg = meo();
  for (int slot : {0, 5, 33})
    for (const auto& s : propagate(cfg, slot, 300.0)) {
      const auto ssp = subsatellite_point(s, cfg.earth_radius_km);
      CHECK(elevation_angle(s, {ssp.lat_deg, ssp.lon_deg, 0.0}, cfg) == 90.0);
    }
}

TEST_CASE("elevation crosses zero where the central angle reaches the horizon") {
  const double ratio = 6378.137 / 26562.137;
  CHECK(std::abs(elevation_equatorial(76.10, 0.0, ratio)) < 0.2);
  const double psi_h = std::acos(ratio) * 180.0 / oracle::kPi;
  CHECK(std::abs(elevation_equatorial(psi_h, 0.0, ratio)) < 1e-9);
  CHECK(elevation_from_central_angle(ratio, std::sqrt(1 - ratio * ratio), ratio) == 0.0);
}

TEST_CASE("elevation is strictly decreasing in central angle") {
  const double ratio = 6378.137 / 26562.137;
  const double horizon = std::acos(ratio);
  double prev = 91.0;
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const double g = horizon * i / 999.0;
    const double e = elevation_from_central_angle(std::cos(g), std::sin(g), ratio);
    if (!(e < prev)) ++violations;
    prev = e;
  }
  CHECK(violations == 0);
}

TEST_CASE("elevation is invariant under a joint rotation about the polar axis") {
  const auto cfg = meo();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lat(-80, 80), lon(-179, 179), rot(-90, 90);
  for (const auto& s : propagate(cfg, 11, 300.0)) {
    for (int i = 0; i < 20; ++i) {
      const GeodeticPoint u{lat(rng), lon(rng), 0.0};
      const double a = rot(rng) * oracle::kPi / 180.0;
      SatelliteState r = s;
      r.position_ecef_km = {std::cos(a) * s.position_ecef_km.x - std::sin(a) * s.position_ecef_km.y,
                            std::sin(a) * s.position_ecef_km.x + std::cos(a) * s.position_ecef_km.y,
                            s.position_ecef_km.z};
      double lon2 = u.lon_deg + a * 180.0 / oracle::kPi;
      if (lon2 > 180.0) lon2 -= 360.0;
      if (lon2 <= -180.0) lon2 += 360.0;
      CHECK(elevation_angle(r, {u.lat_deg, lon2, 0.0}, cfg) ==
            doctest::Approx(elevation_angle(s, u, cfg)).epsilon(1e-9));
    }
  }
}

TEST_CASE("elevation agrees with the vector-geometry definition") {
  const auto cfg = meo();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lat(-80, 80), lon(-179, 179);
  for (const auto& s : propagate(cfg, 7, 300.0))
    for (int i = 0; i < 50; ++i) {
      const GeodeticPoint u{lat(rng), lon(rng), 0.0};
      const Vec3 up = to_ecef(u, cfg.earth_radius_km);
      const Vec3 los = s.position_ecef_km - up;
      const double expected = 90.0 - std::acos(los.dot(up) / (los.norm() * up.norm())) * 180.0 / oracle::kPi;
      CHECK(elevation_angle(s, u, cfg) == doctest::Approx(expected).epsilon(1e-9));
      CHECK(slant_range_km(s, u, cfg) == doctest::Approx(los.norm()).epsilon(1e-9));
    }
}

TEST_CASE("visibility gate") {
  const auto cfg = meo();
  const auto s = propagate(cfg, 0, 300.0)[0];
  const auto ssp = subsatellite_point(s, cfg.earth_radius_km);
  CHECK(visible(s, {ssp.lat_deg, ssp.lon_deg, 0.0}, 15.0, cfg));
  CHECK_FALSE(visible(s, {-ssp.lat_deg, ssp.lon_deg > 0 ? ssp.lon_deg - 180 : ssp.lon_deg + 180, 0.0}, 15.0, cfg));
}

TEST_CASE("every shipped city sees at least one satellite on average over an orbit") {
  const auto sc = load_scenario(SATMIG_SCENARIO_DIR "/default.json");
  const auto& cfg = sc.constellation;
  const int slots = static_cast<int>(std::ceil(cfg.orbital_period_s() / sc.env.slot_seconds));
  for (const auto& c : sc.clusters) {
    int total = 0;
    for (int n = 0; n < slots; ++n)
      for (const auto& s : propagate(cfg, n, sc.env.slot_seconds))
        total += visible(s, c.location, sc.env.theta_min_deg, cfg) ? 1 : 0;
    CHECK_MESSAGE(static_cast<double>(total) / slots >= 1.0, c.name);
  }
}
