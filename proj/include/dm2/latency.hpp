// Scheme-level latency laws, conditioned on frame success (every curve here
// normalizes to 1 over delivered frames), and frame delivery probabilities.
//
// All closed forms are signed mixtures of exponentials:
//   alternating      0.5*Exp(r1) + 0.5*Exp(r2),        r_j = mu_j*(1-sigma_j)
//   minimum          Exp(R1+R2),                       R_j = 2*eta*mu_j*(1-sigma_j)
//   minimum w/ errors phi12*Exp(R1+R2) + phi1*Exp(R1) + phi2*Exp(R2)
//   maximum          Exp(R1) + Exp(R2) - Exp(R1+R2)
// The error-prone minimum is the phi-mixture that integrates to 1; the
// other printed variant carries a stray (1-sigma1)(1-sigma2) factor and
// does not normalize.
#pragma once

#include <string>
#include <vector>

#include "dm2/model.hpp"

namespace dm2 {

// sum_k w_k * Exp(rate_k). Weights sum to 1 and may be negative.
class ExpMixture {
public:
    struct Term {
        double weight;
        double rate;
    };

    explicit ExpMixture(std::vector<Term> terms);

    double pdf(double t) const;
    double cdf(double t) const;
    double survival(double t) const;
    // Finite even where survival underflows to 0 (t beyond ~700/rate):
    // falls back to the slowest-decaying positive term.
    double log_survival(double t) const;
    double mean() const;
    // Inverse cdf by bisection, absolute tolerance 1e-9 in t; upper bracket
    // grown geometrically from the mean.
    double quantile(double p) const;

    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
    double mean_ = 0.0;
};

struct DistributionCurve {
    ExpMixture law;
    std::string label;

    double pdf(double t) const { return law.pdf(t); }
    double cdf(double t) const { return law.cdf(t); }
    double mean() const { return law.mean(); }
    static constexpr double support_lo = 0.0;
};

// Success-split probabilities for a synchronized frame on two erasure
// channels. phi_* are conditioned on at least one packet getting through.
struct ErasureWeights {
    double ps_min;  // 1 - e1*e2
    double phi_12;  // both packets delivered
    double phi_1;   // only the path-1 packet delivered
    double phi_2;   // only the path-2 packet delivered
    double ps_max;  // (1-e1)*(1-e2)
};

ErasureWeights erasure_weights(double eps1, double eps2);

// Latency of a delivered packet under round-robin scheduling: equal mixture
// of the two per-path D/M/1 laws (erasures drop frames whole, so the
// conditional latency is unchanged).
DistributionCurve alt_latency(const SystemConfig& cfg);

// First packet of a synchronized pair, error-free: exponential with rate
// 2*eta*(mu1*(1-sigma1) + mu2*(1-sigma2)).
DistributionCurve min_latency(const SystemConfig& cfg);

// First delivered packet of a synchronized pair over erasure channels,
// conditioned on frame success.
DistributionCurve min_latency_err(const SystemConfig& cfg);

// Second packet of a synchronized pair; cdf factors as P1(t)*P2(t).
DistributionCurve max_latency(const SystemConfig& cfg);

// LQ resolves to min_latency_err, HQ to max_latency, with the coded eta.
// HQ at eta = 0.5 returns the replicated law (both packets identical).
DistributionCurve coded_latency(const SystemConfig& cfg, Quality quality);

// Dispatch on the config's scheme; QueueBased is rejected (simulation-only).
DistributionCurve scheme_latency(const SystemConfig& cfg, Quality quality);

// Probability that a frame reaches the requested quality.
// Alternating: 1-(e1+e2)/2; min-type: 1-e1*e2; max-type: (1-e1)*(1-e2).
double delivery_probability(const Scheme& s, Quality quality, double eps1,
                            double eps2);

}  // namespace dm2
