// Per-path D/M/1 building blocks: the Erlang fixed point sigma, the
// geometric queue-state pmf seen by arrivals, and the stationary system
// time law of a delivered packet.
#pragma once

#include <cstdint>

#include "dm2/model.hpp"

namespace dm2 {

// Root of x = exp(a*(x-1)) in (0,1). Exists iff a > 1 (load below 1).
struct SigmaRoot {
    double a = 0.0;
    double sigma = 0.0;
    double residual = 0.0;  // |sigma - exp(a*(sigma-1))|, kept below 1e-12
};

// Damped fixed-point iteration from x0 = exp(-a) (always below the root,
// converges monotonically), then Newton polish. Deterministic.
// Throws std::domain_error for a <= 1, naming the stability condition.
SigmaRoot solve_sigma(double a);

// P{Q = q} just before an arrival: (1-sigma) * sigma^q.
double queue_state_pmf(const SigmaRoot& root, std::uint64_t q);

// Stationary system time of a packet on a path with size-adjusted service
// rate mu_eff: exponential with rate mu_eff * (1 - sigma). Zero for t < 0.
double dm1_latency_pdf(double mu_eff, const SigmaRoot& root, double t);
double dm1_latency_cdf(double mu_eff, const SigmaRoot& root, double t);

// solve_sigma at sigma_exponent(cfg, path_index).
SigmaRoot path_sigma(const SystemConfig& cfg, int path_index);

}  // namespace dm2
