#include "dm2/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "numeric.hpp"

namespace dm2 {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty())
        throw std::invalid_argument("empirical distribution needs samples");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double t) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
    return static_cast<double>(it - samples_.begin()) /
           static_cast<double>(samples_.size());
}

EmpiricalDistribution empirical_cdf(std::vector<double> samples) {
    return EmpiricalDistribution(std::move(samples));
}

double percentile(const EmpiricalDistribution& dist, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("percentile probability must lie in (0,1)");
    const auto n = dist.count();
    auto rank = static_cast<std::size_t>(
        std::ceil(p * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return dist.samples()[rank - 1];
}

double percentile(const DistributionCurve& curve, double p) {
    return curve.law.quantile(p);
}

double percentile(const PaoiCurve& curve, double p) { return curve.quantile(p); }

double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& cdf) {
    const auto& xs = emp.samples();
    const double n = static_cast<double>(xs.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
        sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
    }
    return sup;
}

double ks_distance(const EmpiricalDistribution& emp,
                   const DistributionCurve& curve) {
    return ks_distance(emp, [&curve](double t) { return curve.cdf(t); });
}

double ks_distance(const EmpiricalDistribution& emp, const PaoiCurve& curve) {
    const auto& xs = emp.samples();
    const std::vector<double> f = curve.cdf_sorted(xs);
    const double n = static_cast<double>(xs.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sup = std::max(sup, std::abs(f[i] - static_cast<double>(i + 1) / n));
        sup = std::max(sup, std::abs(f[i] - static_cast<double>(i) / n));
    }
    return sup;
}

double one_sided_excess(const EmpiricalDistribution& emp,
                        const PaoiCurve& bound) {
    const auto& xs = emp.samples();
    const std::vector<double> f = bound.cdf_sorted(xs);
    const double n = static_cast<double>(xs.size());
    const double mass = bound.raw_mass();
    double excess = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        excess = std::max(excess,
                          static_cast<double>(i + 1) / n - mass * f[i]);
    return std::max(excess, 0.0);
}

}  // namespace dm2
