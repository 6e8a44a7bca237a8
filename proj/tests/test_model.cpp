#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "dm2/model.hpp"

using namespace dm2;

namespace {

SystemConfig config(Scheme s, double tau, double mu1, double mu2,
                    double e1 = 0.0, double e2 = 0.0) {
    return {s, tau, {PathParams{mu1, e1}, PathParams{mu2, e2}}};
}

}  // namespace

TEST_CASE("packet sizes per scheme") {
    CHECK(packet_size(Scheme::alternating()) == 1.0);
    CHECK(packet_size(Scheme::replicated()) == 1.0);
    CHECK(packet_size(Scheme::split()) == 0.5);
    CHECK(packet_size(Scheme::coded(0.75)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(packet_size(Scheme::queue_based()) == 1.0);
    // coded extremes coincide with replicated and split
    CHECK(packet_size(Scheme::coded(0.5)) == packet_size(Scheme::replicated()));
    CHECK(packet_size(Scheme::coded(1.0)) == packet_size(Scheme::split()));
}

TEST_CASE("arrival rates per scheme") {
    CHECK(arrival_rate(Scheme::alternating(), 1.0) == 0.5);
    CHECK(arrival_rate(Scheme::replicated(), 2.0) == 0.5);
    CHECK(arrival_rate(Scheme::coded(0.9), 0.75) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(arrival_rate(Scheme::queue_based(), 1.0) == 0.5);
    CHECK(arrival_rate(Scheme::split(), 4.0) == 0.25);
}

TEST_CASE("path loads") {
    CHECK(path_load(config(Scheme::alternating(), 1.0, 1.0, 1.0), 1) == 0.5);
    CHECK(path_load(config(Scheme::replicated(), 0.75, 1.0, 1.0), 1) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(path_load(config(Scheme::coded(0.75), 1.5, 1.0, 1.0), 2) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("load monotonicity") {
    const double taus[] = {0.8, 1.0, 1.3, 2.0, 5.0};
    double prev = 1e9;
    for (double tau : taus) {
        const double rho = path_load(config(Scheme::split(), tau, 1.0, 1.0), 1);
        CHECK(rho < prev);  // decreasing in tau
        prev = rho;
    }
    // decreasing in mu
    CHECK(path_load(config(Scheme::split(), 1.0, 2.0, 1.0), 1) <
          path_load(config(Scheme::split(), 1.0, 1.0, 1.0), 1));
    // increasing in L (smaller eta means bigger packets)
    CHECK(path_load(config(Scheme::coded(0.6), 1.5, 1.0, 1.0), 1) >
          path_load(config(Scheme::coded(0.9), 1.5, 1.0, 1.0), 1));
}

TEST_CASE("effective service rate follows mu/L") {
    const auto cfg = config(Scheme::coded(0.75), 1.5, 1.0, 2.0);
    CHECK(effective_service_rate(cfg, 1) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(effective_service_rate(cfg, 2) == doctest::Approx(3.0).epsilon(1e-12));
    // exponent a = 1/rho for every scheme
    for (int j : {1, 2})
        CHECK(sigma_exponent(cfg, j) ==
              doctest::Approx(1.0 / path_load(cfg, j)).epsilon(1e-12));
}

TEST_CASE("stability check") {
    auto rep = check_stability(config(Scheme::replicated(), 1.5, 1.0, 1.0));
    CHECK(rep.stable);
    CHECK(rep.load[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    auto bad = check_stability(config(Scheme::replicated(), 0.75, 1.0, 1.0));
    CHECK_FALSE(bad.stable);
    CHECK(bad.load[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(bad.message.find("path 1") != std::string::npos);
    CHECK(bad.message.find("path 2") != std::string::npos);

    CHECK(check_stability(config(Scheme::split(), 0.75, 1.0, 1.0)).stable);

    // strict inequality: rho exactly 1 is rejected
    CHECK_FALSE(check_stability(config(Scheme::replicated(), 1.0, 1.0, 1.0)).stable);
    CHECK_THROWS_AS(require_stable(config(Scheme::replicated(), 1.0, 1.0, 1.0)),
                    std::domain_error);

    // stable iff both loads < 1
    auto one_bad = check_stability(config(Scheme::split(), 0.75, 1.0, 0.5));
    CHECK_FALSE(one_bad.stable);
    CHECK(one_bad.load[0] < 1.0);
    CHECK(one_bad.load[1] > 1.0);
    CHECK(one_bad.message.find("path 2") != std::string::npos);
    CHECK(one_bad.message.find("path 1 load") == std::string::npos);
}

TEST_CASE("validation rejects out-of-domain parameters") {
    CHECK_THROWS_AS(validate(Scheme::coded(0.4)), std::invalid_argument);
    CHECK_THROWS_AS(validate(Scheme::coded(1.2)), std::invalid_argument);
    CHECK_NOTHROW(validate(Scheme::coded(0.5)));
    CHECK_NOTHROW(validate(Scheme::coded(1.0)));

    CHECK_THROWS_AS(validate(config(Scheme::split(), 0.0, 1.0, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(config(Scheme::split(), 1.0, 0.0, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(config(Scheme::split(), 1.0, 1.0, 1.0, 0.0, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(config(Scheme::split(), 1.0, 1.0, 1.0, -0.1, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(path_load(config(Scheme::split(), 1.0, 1.0, 1.0), 3),
                    std::invalid_argument);
}
