// Two-path D/M/2 frame delivery: scheme parameterization, derived
// quantities (packet size L, per-path arrival rate, load) and stability.
//
// Conventions used throughout the library:
//  - a packet of size L on path j receives exponential service with rate
//    mu_j / L, so synchronized schemes (one packet per path per frame,
//    L = 1/(2*eta)) see rate 2*eta*mu_j;
//  - the queue-based scheduler sends whole frames (L = 1) and is accounted
//    with lambda = 1/(2*tau) per path on average;
//  - stability requires the load strictly below 1 on both paths.
#pragma once

#include <array>
#include <string>

namespace dm2 {

// One link: exponential service with rate mu for a unit-size packet,
// independent per-packet erasure with probability epsilon.
struct PathParams {
    double mu = 1.0;
    double epsilon = 0.0;
};

enum class SchemeKind { Alternating, Replicated, Split, Coded, QueueBased };

// Frame-to-packet mapping. Coded carries the MDC rate eta in [0.5, 1]:
// each of the two descriptors has size 1/(2*eta); eta = 0.5 duplicates the
// frame (replicated), eta = 1 splits it in half (split).
struct Scheme {
    SchemeKind kind = SchemeKind::Alternating;
    double eta = 1.0;  // meaningful for Coded only

    static Scheme alternating() { return {SchemeKind::Alternating, 1.0}; }
    static Scheme replicated() { return {SchemeKind::Replicated, 0.5}; }
    static Scheme split() { return {SchemeKind::Split, 1.0}; }
    static Scheme coded(double eta) { return {SchemeKind::Coded, eta}; }
    static Scheme queue_based() { return {SchemeKind::QueueBased, 1.0}; }

    // True when every frame puts one packet on each path simultaneously.
    bool synchronized_pair() const {
        return kind == SchemeKind::Replicated || kind == SchemeKind::Split ||
               kind == SchemeKind::Coded;
    }
};

// Frame quality a receiver may ask about. LQ: any one descriptor decodes a
// reduced-quality frame; HQ: all descriptors needed. Whole is the single
// quality of the non-coded schemes (replicated resolves to the first copy,
// split to the pair).
enum class Quality { Whole, LQ, HQ };

const char* to_string(SchemeKind k);
const char* to_string(Quality q);

struct SystemConfig {
    Scheme scheme;
    double tau = 1.0;  // inter-frame period
    std::array<PathParams, 2> paths{};
};

// Throw std::invalid_argument on out-of-domain parameters.
void validate(const Scheme& s);
void validate(const SystemConfig& cfg);

// Normalized packet size L for one packet of the scheme.
double packet_size(const Scheme& s);

// Per-path packet arrival rate lambda_j.
double arrival_rate(const Scheme& s, double tau);

// rho_j = L * lambda_j / mu_j. path_index is 1 or 2.
double path_load(const SystemConfig& cfg, int path_index);

// mu_j / L: the service rate one packet of this scheme sees on the path.
double effective_service_rate(const SystemConfig& cfg, int path_index);

// Exponent coefficient a_j = (effective rate) * (per-path interarrival),
// i.e. 2*mu_j*tau for alternating and 2*eta*mu_j*tau for synchronized
// schemes. Equals 1/rho_j; the D/M/1 fixed point exists iff a_j > 1.
double sigma_exponent(const SystemConfig& cfg, int path_index);

struct StabilityReport {
    bool stable = false;
    std::array<double, 2> load{};
    std::string message;  // names the violating path(s) when unstable
};

// Never throws for a valid config; loads at exactly 1 count as unstable.
StabilityReport check_stability(const SystemConfig& cfg);

// Analytic modules call this; throws std::domain_error with the report
// message when either path is overloaded.
void require_stable(const SystemConfig& cfg);

}  // namespace dm2
