// Internal quadrature and root-bracketing helpers.
#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace dm2::detail {

// 32-point Gauss-Legendre rule on [-1, 1], positive nodes (symmetric).
inline constexpr std::array<double, 16> kGaussX = {
    0.0483076656877383103783075, 0.1444719615827964875887091,
    0.2392873622521370646776262, 0.3318686022821276671024293,
    0.4213512761306353326951069, 0.5068999089322293594150892,
    0.5877157572407623042920477, 0.6630442669302152314259047,
    0.7321821187402897113116751, 0.7944837959679423855519076,
    0.8493676137325699704305748, 0.8963211557660522021961924,
    0.9349060759377396667701987, 0.9647622555875063898866983,
    0.9856115115452683816954504, 0.9972638618494815698767297};
inline constexpr std::array<double, 16> kGaussW = {
    0.0965400885147278120523850, 0.0956387200792748332078830,
    0.0938443990808045663820636, 0.0911738786957638630559231,
    0.0876520930044039081607821, 0.0833119242269468457395831,
    0.0781938957870703110764055, 0.0723457941088484490776978,
    0.0658222227763617523388362, 0.0586840934785357037917208,
    0.0509980592623762440940283, 0.0428358980222264262849308,
    0.0342738629130216257423491, 0.0253920653092624265534383,
    0.0162743947309059652783780, 0.0070186100094692983886180};

// Integral of f over [a, b] with one 32-point rule.
template <class F>
double gauss32(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 16; ++i)
        acc += kGaussW[i] * (f(c - h * kGaussX[i]) + f(c + h * kGaussX[i]));
    return acc * h;
}

// Composite rule with n equal panels.
template <class F>
double gauss32n(const F& f, double a, double b, int n) {
    double acc = 0.0;
    const double h = (b - a) / n;
    for (int k = 0; k < n; ++k) acc += gauss32(f, a + k * h, a + (k + 1) * h);
    return acc;
}

// Monotone-cdf inversion: smallest t >= lo with cdf(t) >= p, bisection to
// 1e-9 absolute. scale seeds the geometric upper-bracket growth.
double invert_cdf(const std::function<double(double)>& cdf, double p,
                  double lo, double scale);

}  // namespace dm2::detail
