#include "dm2/dm1.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dm2 {

SigmaRoot solve_sigma(double a) {
    if (!(a > 1.0)) {
        std::ostringstream msg;
        msg << "x = exp(a(x-1)) has no root in (0,1) for a = " << a
            << "; stability requires rho = 1/a < 1";
        throw std::domain_error(msg.str());
    }
    // x0 = exp(-a) sits below the root; the map x -> exp(a(x-1)) is
    // increasing, so iterates ascend monotonically toward it. Contraction
    // slows near a = 1 (derivative a*sigma), hence the Newton finish.
    double x = std::exp(-a);
    for (int i = 0; i < 200000; ++i) {
        const double nx = std::exp(a * (x - 1.0));
        const double dx = nx - x;
        x = nx;
        if (std::abs(dx) < 1e-6) break;
    }
    for (int i = 0; i < 60; ++i) {
        const double ex = std::exp(a * (x - 1.0));
        const double f = x - ex;
        const double fp = 1.0 - a * ex;
        if (fp == 0.0) break;
        const double step = f / fp;
        x -= step;
        if (std::abs(step) < 1e-16) break;
    }
    SigmaRoot root;
    root.a = a;
    root.sigma = x;
    root.residual = std::abs(x - std::exp(a * (x - 1.0)));
    return root;
}

double queue_state_pmf(const SigmaRoot& root, std::uint64_t q) {
    return (1.0 - root.sigma) * std::pow(root.sigma, static_cast<double>(q));
}

double dm1_latency_pdf(double mu_eff, const SigmaRoot& root, double t) {
    if (t < 0.0) return 0.0;
    const double rate = mu_eff * (1.0 - root.sigma);
    return rate * std::exp(-rate * t);
}

double dm1_latency_cdf(double mu_eff, const SigmaRoot& root, double t) {
    if (t < 0.0) return 0.0;
    const double rate = mu_eff * (1.0 - root.sigma);
    return -std::expm1(-rate * t);
}

SigmaRoot path_sigma(const SystemConfig& cfg, int path_index) {
    return solve_sigma(sigma_exponent(cfg, path_index));
}

}  // namespace dm2
