#include "dm2/paoi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dm2/dm1.hpp"
#include "numeric.hpp"

namespace dm2 {

namespace {

// 8-point Gauss-Legendre, used for the short spans of the incremental
// cdf sweep.
constexpr std::array<double, 4> kG8X = {
    0.1834346424956498049394761, 0.5255324099163289858177390,
    0.7966664774136267395915539, 0.9602898564975362316835609};
constexpr std::array<double, 4> kG8W = {
    0.3626837833783619829651504, 0.3137066458778872873379622,
    0.2223810344533744705443560, 0.1012285362903762591525314};

template <class F>
double gauss8(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i)
        acc += kG8W[i] * (f(c - h * kG8X[i]) + f(c + h * kG8X[i]));
    return acc * h;
}

}  // namespace

PaoiCurve::PaoiCurve(std::function<double(double)> density, double tau,
                     std::string label, bool lower_bound, double rate_hint)
    : density_(std::move(density)),
      tau_(tau),
      label_(std::move(label)),
      lower_bound_(lower_bound) {
    if (!(tau_ > 0.0)) throw std::invalid_argument("tau must be > 0");
    // Panels per tau-segment sized so exp(-rate*t) is resolved by the
    // 32-point rule with headroom.
    subdiv_ = static_cast<int>(
        std::clamp(std::ceil(tau_ * std::max(rate_hint, 1.0) / 8.0), 1.0, 8.0));

    // Integrate segment by segment until the tail stops contributing. The
    // density has breakpoints only at multiples of tau, so each segment is
    // smooth. Accumulates raw mass and mean together.
    cum_.push_back(0.0);
    double mean_acc = 0.0;
    int quiet = 0;
    const std::size_t kMaxSegments = 200000;
    for (std::size_t k = 0; k < kMaxSegments; ++k) {
        const double lo = static_cast<double>(k) * tau_;
        const double hi = lo + tau_;
        const double m = segment_integral(lo, hi);
        mean_acc += detail::gauss32n(
            [this](double d) { return d * density_(d); }, lo, hi, subdiv_);
        cum_.push_back(cum_.back() + m);
        if (k >= 2 && m < 1e-13 * std::max(cum_.back(), 1.0))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= 3 && cum_.back() > 0.5) break;
    }
    raw_mass_ = cum_.back();
    if (!(raw_mass_ > 0.0))
        throw std::invalid_argument("peak-age density integrates to zero");
    mean_ = mean_acc / raw_mass_;
}

double PaoiCurve::segment_integral(double lo, double hi) const {
    return detail::gauss32n([this](double d) { return density_(d); }, lo, hi,
                            subdiv_);
}

double PaoiCurve::pdf(double delta) const {
    if (delta < tau_) return 0.0;
    return density_(delta) / raw_mass_;
}

double PaoiCurve::cdf(double delta) const {
    if (delta <= tau_) return 0.0;
    const auto k = static_cast<std::size_t>(delta / tau_);
    if (k + 1 >= cum_.size()) return 1.0;
    const double lo = static_cast<double>(k) * tau_;
    const double raw = cum_[k] + segment_integral(lo, delta);
    return std::min(raw / raw_mass_, 1.0);
}

std::vector<double> PaoiCurve::cdf_sorted(std::span<const double> deltas) const {
    std::vector<double> out(deltas.size());
    const double horizon = static_cast<double>(cum_.size() - 1) * tau_;
    const double panel = tau_ / subdiv_;
    std::size_t seg = 0;
    double t_prev = 0.0;
    double raw = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double d = deltas[i];
        if (i > 0 && d < deltas[i - 1])
            throw std::invalid_argument("cdf_sorted input must be nondecreasing");
        if (d >= horizon) {
            out[i] = 1.0;
            continue;
        }
        if (d <= tau_) {
            out[i] = 0.0;
            continue;
        }
        const auto k = static_cast<std::size_t>(d / tau_);
        if (k > seg) {
            seg = k;
            t_prev = static_cast<double>(k) * tau_;
            raw = cum_[k];
        }
        if (d > t_prev) {
            const int panels =
                std::max(1, static_cast<int>(std::ceil((d - t_prev) / panel)));
            const double h = (d - t_prev) / panels;
            for (int q = 0; q < panels; ++q)
                raw += gauss8([this](double x) { return density_(x); },
                              t_prev + q * h, t_prev + (q + 1) * h);
            t_prev = d;
        }
        out[i] = std::min(raw / raw_mass_, 1.0);
    }
    return out;
}

double PaoiCurve::quantile(double p) const {
    return detail::invert_cdf([this](double d) { return cdf(d); }, p, tau_,
                              std::max(mean_ - tau_, tau_));
}

double sync_paoi_pdf(double p_s, const DistributionCurve& latency, double tau,
                     double delta) {
    if (!(p_s > 0.0 && p_s <= 1.0))
        throw std::invalid_argument(
            "success probability must lie in (0,1]: with p_s = 0 no frame is "
            "ever delivered and the peak age is undefined");
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    if (delta < tau) return 0.0;
    // floor(delta/tau) terms; the sum is finite, no truncation.
    const auto fmax = static_cast<std::uint64_t>(delta / tau);
    double acc = 0.0;
    double w = p_s;
    for (std::uint64_t f = 0; f < fmax; ++f) {
        acc += w * latency.pdf(delta - static_cast<double>(f + 1) * tau);
        w *= 1.0 - p_s;
        if (w == 0.0) break;
    }
    return acc;
}

PaoiCurve sync_paoi(const SystemConfig& cfg, Quality quality) {
    if (!cfg.scheme.synchronized_pair())
        throw std::invalid_argument("sync_paoi requires a synchronized scheme");
    const bool max_type =
        (cfg.scheme.kind == SchemeKind::Split) ||
        (cfg.scheme.kind == SchemeKind::Coded && quality == Quality::HQ);
    const ErasureWeights w =
        erasure_weights(cfg.paths[0].epsilon, cfg.paths[1].epsilon);
    const double p_s = max_type ? w.ps_max : w.ps_min;
    const DistributionCurve law =
        max_type ? max_latency(cfg) : min_latency_err(cfg);
    double rate_hint = 0.0;
    for (const auto& t : law.law.terms()) rate_hint = std::max(rate_hint, t.rate);
    const double tau = cfg.tau;
    auto density = [p_s, law, tau](double delta) {
        return sync_paoi_pdf(p_s, law, tau, delta);
    };
    return PaoiCurve(density, tau, law.label + " paoi", false, rate_hint);
}

namespace {

// Closed-form pieces of the alternating analysis (error-free service
// dynamics; sigma_j from a = 2*mu_j*tau).
struct AltLaw {
    double tau;
    std::array<double, 2> mu;
    std::array<double, 2> sigma;
    std::array<double, 2> r;   // mu_j * (1 - sigma_j)
    std::array<double, 2> pr;  // relevance probabilities

    static AltLaw make(const SystemConfig& cfg) {
        if (cfg.scheme.kind != SchemeKind::Alternating)
            throw std::invalid_argument("alternating-scheme analysis requires "
                                        "the alternating scheme");
        require_stable(cfg);
        AltLaw law{};
        law.tau = cfg.tau;
        for (int j = 0; j < 2; ++j) {
            law.mu[j] = cfg.paths[j].mu;
            law.sigma[j] = path_sigma(cfg, j + 1).sigma;
            law.r[j] = law.mu[j] * (1.0 - law.sigma[j]);
        }
        const double rsum = law.r[0] + law.r[1];
        for (int j = 0; j < 2; ++j)
            law.pr[j] = 1.0 - std::exp(-law.r[j] * law.tau) *
                                  (1.0 - law.r[j] / rsum);
        return law;
    }

    // Peak-age density conditional on an informative arrival from path j.
    // Branches: the previous frame (other path) arrived first and the age
    // spans one period, or it was overtaken and the age spans two. The
    // density jumps at delta = 2*tau where the second branch switches on.
    double p_delta(double delta, int j) const {
        if (delta < tau) return 0.0;
        const int o = 1 - j;
        const double pref =
            r[j] * std::exp(-r[j] * (delta - tau)) / pr[j];
        double bracket;
        if (delta < 2.0 * tau) {
            bracket = -std::expm1(-r[o] * delta);
        } else {
            const double b1 =
                std::exp(-r[o] * (delta - tau) + r[j] * tau);
            const double b2 = -std::expm1(-2.0 * r[o] * tau) *
                              std::exp(-mu[o] * (delta - 2.0 * tau));
            const double b3 = (1.0 - sigma[o]) / sigma[o] *
                              std::exp(-r[o] * delta) *
                              -std::expm1(-mu[o] * sigma[o] * (delta - 2.0 * tau));
            bracket = b1 + b2 + b3;
        }
        return pref * bracket;
    }

    double pdf(double delta) const {
        return (pr[0] * p_delta(delta, 0) + pr[1] * p_delta(delta, 1)) /
               (pr[0] + pr[1]);
    }
};

// The error-prone lower-bound mixture, verbatim: failure chains alternate
// paths (epsilon exponents floor(f/2) and ceil(f/2)) and the per-path
// system time is conditioned on relevance, with the next-packet erasure
// relaxing the relevance event.
struct AltBound {
    AltLaw law;
    std::array<double, 2> eps;

    double pt_rel(double t, int j) const {
        if (t < 0.0) return 0.0;
        const int o = 1 - j;
        const double g =
            t < law.tau ? 1.0 : std::exp(-law.r[o] * (t - law.tau));
        return law.r[j] * std::exp(-law.r[j] * t) *
               (eps[o] + (1.0 - eps[o]) * g) /
               (eps[o] + (1.0 - eps[o]) * law.pr[j]);
    }

    double pdf(double delta) const {
        const double e1 = eps[0], e2 = eps[1];
        const double den = (1.0 - e1) * (e2 + (1.0 - e2) * law.pr[0]) +
                           (1.0 - e2) * (e1 + (1.0 - e1) * law.pr[1]);
        double num = (1.0 - e1) * (1.0 - e2) *
                     (law.pr[0] * law.p_delta(delta, 0) +
                      law.pr[1] * law.p_delta(delta, 1));
        double w1 = 1.0, w2 = 1.0;
        for (int f = 1;; ++f) {
            const double arg = delta - static_cast<double>(f + 1) * law.tau;
            if (arg < 0.0) break;
            if (f % 2 == 1) {
                w1 *= e2;
                w2 *= e1;
            } else {
                w1 *= e1;
                w2 *= e2;
            }
            num += (1.0 - e1) * w1 * pt_rel(arg, 0) +
                   (1.0 - e2) * w2 * pt_rel(arg, 1);
        }
        return num / den;
    }
};

}  // namespace

std::pair<double, double> alt_relevance_probability(const SystemConfig& cfg) {
    const AltLaw law = AltLaw::make(cfg);
    return {law.pr[0], law.pr[1]};
}

PaoiCurve alt_paoi(const SystemConfig& cfg) {
    if (cfg.paths[0].epsilon != 0.0 || cfg.paths[1].epsilon != 0.0)
        throw std::invalid_argument(
            "alt_paoi is the error-free law; use alt_paoi_bound for "
            "erasure-prone paths");
    const AltLaw law = AltLaw::make(cfg);
    return PaoiCurve([law](double d) { return law.pdf(d); }, cfg.tau,
                     "alternating paoi", false, law.mu[0] + law.mu[1]);
}

PaoiCurve alt_paoi_bound(const SystemConfig& cfg) {
    const AltBound bound{AltLaw::make(cfg),
                         {cfg.paths[0].epsilon, cfg.paths[1].epsilon}};
    const bool has_err = bound.eps[0] > 0.0 || bound.eps[1] > 0.0;
    return PaoiCurve([bound](double d) { return bound.pdf(d); }, cfg.tau,
                     "alternating paoi bound", has_err,
                     bound.law.mu[0] + bound.law.mu[1]);
}

PaoiCurve scheme_paoi(const SystemConfig& cfg, Quality quality) {
    switch (cfg.scheme.kind) {
        case SchemeKind::Alternating: {
            if (quality != Quality::Whole)
                throw std::invalid_argument("alternating has only Whole quality");
            const bool err =
                cfg.paths[0].epsilon > 0.0 || cfg.paths[1].epsilon > 0.0;
            return err ? alt_paoi_bound(cfg) : alt_paoi(cfg);
        }
        case SchemeKind::Replicated:
            if (quality == Quality::HQ)
                throw std::invalid_argument("replicated has no HQ quality");
            return sync_paoi(cfg, Quality::Whole);
        case SchemeKind::Split:
            if (quality == Quality::LQ)
                throw std::invalid_argument("split has no LQ quality");
            return sync_paoi(cfg, Quality::HQ);
        case SchemeKind::Coded:
            if (quality == Quality::Whole)
                throw std::invalid_argument(
                    "coded frames have LQ/HQ qualities, not Whole");
            return sync_paoi(cfg, quality);
        case SchemeKind::QueueBased:
            throw std::invalid_argument(
                "queue_based has no analytic peak-age law (simulation only)");
    }
    throw std::invalid_argument("unknown scheme");
}

}  // namespace dm2
