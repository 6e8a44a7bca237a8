// Peak Age of Information laws: the failure-convolution PAoI of the
// synchronized schemes, the alternating relevance probabilities and exact
// error-free PAoI, and the alternating error-prone lower bound.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dm2/latency.hpp"
#include "dm2/model.hpp"

namespace dm2 {

// Density over ages with support starting at tau and breakpoints at integer
// multiples of tau. The cdf is computed by piecewise Gauss-Legendre
// integration; per-segment cumulative sums are precomputed at construction,
// so instances are immutable and safe to share across threads.
//
// The stored density is normalized to total mass 1. For exact laws the raw
// integral is already 1; the alternating error-prone bound integrates to
// slightly more (its mixture overcounts failure events), which raw_mass()
// reports. The verbatim bound cdf used for one-sided comparisons is
// raw_mass() * cdf(); percentiles invert the normalized cdf.
class PaoiCurve {
public:
    PaoiCurve(std::function<double(double)> density, double tau,
              std::string label, bool lower_bound, double rate_hint);

    double pdf(double delta) const;  // normalized
    double cdf(double delta) const;  // normalized
    // cdf at many points, nondecreasing input; single incremental sweep.
    std::vector<double> cdf_sorted(std::span<const double> deltas) const;

    double mean() const { return mean_; }
    double raw_mass() const { return raw_mass_; }
    // Inverse of the normalized cdf, bisection to 1e-9 absolute in delta.
    double quantile(double p) const;

    double tau() const { return tau_; }
    bool is_lower_bound() const { return lower_bound_; }
    const std::string& label() const { return label_; }

private:
    double segment_integral(double lo, double hi) const;

    std::function<double(double)> density_;
    double tau_;
    std::string label_;
    bool lower_bound_;
    int subdiv_;            // sub-intervals per tau-segment for quadrature
    double raw_mass_ = 0.0;
    double mean_ = 0.0;
    std::vector<double> cum_;  // raw integral of density_ up to k*tau
};

// p_s * sum_{f=0}^{floor(delta/tau)-1} (1-p_s)^f * p_T(delta-(f+1)*tau).
// The sum is finite and evaluated exactly. Throws for p_s <= 0.
double sync_paoi_pdf(double p_s, const DistributionCurve& latency, double tau,
                     double delta);

// PAoI of a synchronized scheme: (ps_min, min_latency_err) for min-type
// qualities, (ps_max, max_latency) for max-type.
PaoiCurve sync_paoi(const SystemConfig& cfg, Quality quality);

// Probability that a packet on path 1 (resp. 2) is relevant, i.e. the next
// frame, sent on the other path, has not arrived before it. Error-free.
std::pair<double, double> alt_relevance_probability(const SystemConfig& cfg);

// Exact error-free alternating PAoI. The density is discontinuous at
// delta = 2*tau (out-of-order arrivals start contributing there).
PaoiCurve alt_paoi(const SystemConfig& cfg);

// Error-prone alternating PAoI lower bound (is_lower_bound() == true): the
// true age distribution lies at or below raw_mass()*cdf(). Reduces exactly
// to alt_paoi when both epsilons are 0.
PaoiCurve alt_paoi_bound(const SystemConfig& cfg);

// Dispatch: synchronized -> sync_paoi; alternating -> alt_paoi when
// error-free, otherwise alt_paoi_bound; QueueBased rejected.
PaoiCurve scheme_paoi(const SystemConfig& cfg, Quality quality);

}  // namespace dm2
