// Empirical distributions and analytic-vs-empirical comparison metrics.
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dm2/latency.hpp"
#include "dm2/paoi.hpp"

namespace dm2 {

class EmpiricalDistribution {
public:
    // Takes ownership, sorts. Throws std::invalid_argument on empty input.
    explicit EmpiricalDistribution(std::vector<double> samples);

    double cdf(double t) const;  // fraction of samples <= t
    std::size_t count() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }  // sorted

private:
    std::vector<double> samples_;
};

EmpiricalDistribution empirical_cdf(std::vector<double> samples);

// Order statistic at index ceil(p*count), 1-based; no interpolation.
double percentile(const EmpiricalDistribution& dist, double p);

// Bisection on the closed-form cdf to 1e-9 absolute in t.
double percentile(const DistributionCurve& curve, double p);
double percentile(const PaoiCurve& curve, double p);

// sup_t |F_hat(t) - F(t)| evaluated at the sample points, both one-sided
// gaps per sample.
double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& cdf);
double ks_distance(const EmpiricalDistribution& emp,
                   const DistributionCurve& curve);
double ks_distance(const EmpiricalDistribution& emp, const PaoiCurve& curve);

// max over sample points of (F_hat - F), clamped at 0: the one-sided
// comparison used against lower-bound curves (F = raw-mass-scaled cdf).
double one_sided_excess(const EmpiricalDistribution& emp,
                        const PaoiCurve& bound);

}  // namespace dm2
