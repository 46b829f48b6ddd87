#pragma once

namespace satmig {

// Rates are per second throughout. Multiply by the slot length to get the
// per-slot packet count.
struct QueueParams {
  double arrival_rate_pps = 0.0;
  double service_rate_pps = 0.0;
  double utilization = 0.0;

  bool stable() const { return service_rate_pps > 0.0 && utilization < 1.0; }
};

QueueParams make_queue(double arrival_rate_pps, double service_rate_pps);

double service_rate(double rate_bps, double packet_bits);

/// P(sojourn <= t) for an FCFS M/M/1 queue: 1 - exp(-mu (1 - rho) t).
/// Zero for an unstable (rho >= 1) or idle (mu = 0) server.
double delay_success_prob(double lambda_pps, double mu_pps, double max_delay_s);

/// Expected delay-compliant bits in one slot: lambda * slot * d * p.
double served_bits(double lambda_pps, double slot_seconds, double packet_bits, double success_prob);

}  // namespace satmig
