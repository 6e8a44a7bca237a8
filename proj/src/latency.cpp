#include "dm2/latency.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "dm2/dm1.hpp"
#include "numeric.hpp"

namespace dm2 {

ExpMixture::ExpMixture(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("empty exponential mixture");
    double wsum = 0.0;
    mean_ = 0.0;
    for (const auto& t : terms_) {
        if (!(t.rate > 0.0))
            throw std::invalid_argument("mixture rates must be > 0");
        wsum += t.weight;
        mean_ += t.weight / t.rate;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("mixture weights must sum to 1");
}

double ExpMixture::pdf(double t) const {
    if (t < 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& term : terms_)
        acc += term.weight * term.rate * std::exp(-term.rate * t);
    return acc;
}

double ExpMixture::cdf(double t) const {
    if (t < 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& term : terms_)
        acc += term.weight * -std::expm1(-term.rate * t);
    return acc;
}

double ExpMixture::survival(double t) const {
    if (t < 0.0) return 1.0;
    double acc = 0.0;
    for (const auto& term : terms_)
        acc += term.weight * std::exp(-term.rate * t);
    return acc;
}

double ExpMixture::log_survival(double t) const {
    const double s = survival(t);
    if (s > 0.0) return std::log(s);
    // All terms underflowed; the slowest positive term dominates.
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& term : terms_) {
        if (term.weight <= 0.0) continue;
        best = std::max(best, std::log(term.weight) - term.rate * t);
    }
    return best;
}

double ExpMixture::mean() const { return mean_; }

double ExpMixture::quantile(double p) const {
    return detail::invert_cdf([this](double t) { return cdf(t); }, p, 0.0,
                              mean_);
}

ErasureWeights erasure_weights(double eps1, double eps2) {
    if (!(eps1 >= 0.0 && eps1 < 1.0 && eps2 >= 0.0 && eps2 < 1.0))
        throw std::invalid_argument("erasure probabilities must lie in [0, 1)");
    ErasureWeights w{};
    w.ps_min = 1.0 - eps1 * eps2;
    w.phi_12 = (1.0 - eps1) * (1.0 - eps2) / w.ps_min;
    w.phi_1 = (1.0 - eps1) * eps2 / w.ps_min;
    w.phi_2 = (1.0 - eps2) * eps1 / w.ps_min;
    w.ps_max = (1.0 - eps1) * (1.0 - eps2);
    return w;
}

namespace {

// eta under the L = 1/(2*eta) convention; replicated and split are the
// coded extremes.
double sync_eta(const Scheme& s) {
    switch (s.kind) {
        case SchemeKind::Replicated: return 0.5;
        case SchemeKind::Split: return 1.0;
        case SchemeKind::Coded: return s.eta;
        default:
            throw std::invalid_argument(
                std::string("scheme ") + to_string(s.kind) +
                " is not a synchronized pair scheme");
    }
}

// Per-path system time rates R_j = 2*eta*mu_j*(1-sigma_j) of a stable
// synchronized config.
std::array<double, 2> sync_rates(const SystemConfig& cfg) {
    require_stable(cfg);
    sync_eta(cfg.scheme);  // rejects non-synchronized schemes
    std::array<double, 2> r{};
    for (int j = 1; j <= 2; ++j) {
        const SigmaRoot root = path_sigma(cfg, j);
        r[j - 1] = effective_service_rate(cfg, j) * (1.0 - root.sigma);
    }
    return r;
}

}  // namespace

DistributionCurve alt_latency(const SystemConfig& cfg) {
    if (cfg.scheme.kind != SchemeKind::Alternating)
        throw std::invalid_argument("alt_latency requires the alternating scheme");
    require_stable(cfg);
    std::array<double, 2> r{};
    for (int j = 1; j <= 2; ++j) {
        const SigmaRoot root = path_sigma(cfg, j);
        r[j - 1] = cfg.paths[j - 1].mu * (1.0 - root.sigma);
    }
    return {ExpMixture({{0.5, r[0]}, {0.5, r[1]}}), "alternating"};
}

DistributionCurve min_latency(const SystemConfig& cfg) {
    const auto r = sync_rates(cfg);
    return {ExpMixture({{1.0, r[0] + r[1]}}), "min"};
}

DistributionCurve min_latency_err(const SystemConfig& cfg) {
    const auto r = sync_rates(cfg);
    const ErasureWeights w =
        erasure_weights(cfg.paths[0].epsilon, cfg.paths[1].epsilon);
    std::vector<ExpMixture::Term> terms{{w.phi_12, r[0] + r[1]}};
    if (w.phi_1 > 0.0) terms.push_back({w.phi_1, r[0]});
    if (w.phi_2 > 0.0) terms.push_back({w.phi_2, r[1]});
    return {ExpMixture(std::move(terms)), "min-err"};
}

DistributionCurve max_latency(const SystemConfig& cfg) {
    const auto r = sync_rates(cfg);
    return {ExpMixture({{1.0, r[0]}, {1.0, r[1]}, {-1.0, r[0] + r[1]}}), "max"};
}

DistributionCurve coded_latency(const SystemConfig& cfg, Quality quality) {
    if (cfg.scheme.kind != SchemeKind::Coded)
        throw std::invalid_argument("coded_latency requires the coded scheme");
    if (quality == Quality::Whole)
        throw std::invalid_argument("coded frames have LQ/HQ qualities, not Whole");
    // Both descriptors are identical at eta = 0.5, so HQ degenerates to the
    // replicated (min) law.
    if (quality == Quality::HQ && cfg.scheme.eta > 0.5) {
        DistributionCurve c = max_latency(cfg);
        c.label = "coded-hq";
        return c;
    }
    DistributionCurve c = min_latency_err(cfg);
    c.label = quality == Quality::HQ ? "coded-hq" : "coded-lq";
    return c;
}

DistributionCurve scheme_latency(const SystemConfig& cfg, Quality quality) {
    switch (cfg.scheme.kind) {
        case SchemeKind::Alternating:
            if (quality != Quality::Whole)
                throw std::invalid_argument("alternating has only Whole quality");
            return alt_latency(cfg);
        case SchemeKind::Replicated: {
            if (quality == Quality::HQ)
                throw std::invalid_argument("replicated has no HQ quality");
            DistributionCurve c = min_latency_err(cfg);
            c.label = "replicated";
            return c;
        }
        case SchemeKind::Split: {
            if (quality == Quality::LQ)
                throw std::invalid_argument("split has no LQ quality");
            DistributionCurve c = max_latency(cfg);
            c.label = "split";
            return c;
        }
        case SchemeKind::Coded:
            return coded_latency(cfg, quality);
        case SchemeKind::QueueBased:
            throw std::invalid_argument(
                "queue_based has no analytic latency law (simulation only)");
    }
    throw std::invalid_argument("unknown scheme");
}

double delivery_probability(const Scheme& s, Quality quality, double eps1,
                            double eps2) {
    if (!(eps1 >= 0.0 && eps1 < 1.0 && eps2 >= 0.0 && eps2 < 1.0))
        throw std::invalid_argument("erasure probabilities must lie in [0, 1)");
    switch (s.kind) {
        case SchemeKind::Alternating:
            return 1.0 - 0.5 * (eps1 + eps2);
        case SchemeKind::Replicated:
            return 1.0 - eps1 * eps2;
        case SchemeKind::Split:
            return (1.0 - eps1) * (1.0 - eps2);
        case SchemeKind::Coded:
            return quality == Quality::HQ ? (1.0 - eps1) * (1.0 - eps2)
                                          : 1.0 - eps1 * eps2;
        case SchemeKind::QueueBased:
            throw std::invalid_argument(
                "queue_based delivery probability is simulation-only");
    }
    throw std::invalid_argument("unknown scheme");
}

}  // namespace dm2
