#include "numeric.hpp"

#include <stdexcept>

namespace dm2::detail {

double invert_cdf(const std::function<double(double)>& cdf, double p,
                  double lo, double scale) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("quantile probability must lie in (0,1)");
    double hi = lo + (scale > 0.0 ? scale : 1.0);
    int guard = 0;
    while (cdf(hi) < p) {
        hi = lo + 2.0 * (hi - lo);
        if (++guard > 200)
            throw std::runtime_error("cdf never reaches requested probability");
    }
    double a = lo, b = hi;
    while (b - a > 1e-9) {
        const double mid = 0.5 * (a + b);
        (cdf(mid) < p ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace dm2::detail
