#include "satmig/queueing.hpp"

#include <cmath>
#include <stdexcept>

namespace satmig {

QueueParams make_queue(double arrival_rate_pps, double service_rate_pps) {
  QueueParams q{arrival_rate_pps, service_rate_pps, 0.0};
  if (service_rate_pps > 0.0) q.utilization = arrival_rate_pps / service_rate_pps;
  else q.utilization = arrival_rate_pps > 0.0 ? INFINITY : 0.0;
  return q;
}

double service_rate(double rate_bps, double packet_bits) {
  if (!(packet_bits > 0.0)) throw std::domain_error("service_rate: packet_bits must be > 0");
  return rate_bps / packet_bits;
}

double delay_success_prob(double lambda_pps, double mu_pps, double max_delay_s) {
  if (!(mu_pps > 0.0)) return 0.0;
  const double rho = lambda_pps / mu_pps;
  if (rho >= 1.0) return 0.0;
  return -std::expm1(-mu_pps * (1.0 - rho) * max_delay_s);
}

double served_bits(double lambda_pps, double slot_seconds, double packet_bits, double success_prob) {
  return lambda_pps * slot_seconds * packet_bits * success_prob;
}

}  // namespace satmig
