#include "dm2/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dm2 {

const char* to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::Alternating: return "alternating";
        case SchemeKind::Replicated: return "replicated";
        case SchemeKind::Split: return "split";
        case SchemeKind::Coded: return "coded";
        case SchemeKind::QueueBased: return "queue_based";
    }
    return "?";
}

const char* to_string(Quality q) {
    switch (q) {
        case Quality::Whole: return "whole";
        case Quality::LQ: return "lq";
        case Quality::HQ: return "hq";
    }
    return "?";
}

void validate(const Scheme& s) {
    if (s.kind == SchemeKind::Coded && !(s.eta >= 0.5 && s.eta <= 1.0))
        throw std::invalid_argument("coded rate eta must lie in [0.5, 1]");
}

void validate(const SystemConfig& cfg) {
    validate(cfg.scheme);
    if (!(cfg.tau > 0.0))
        throw std::invalid_argument("inter-frame period tau must be > 0");
    for (const auto& p : cfg.paths) {
        if (!(p.mu > 0.0))
            throw std::invalid_argument("service rate mu must be > 0");
        if (!(p.epsilon >= 0.0 && p.epsilon < 1.0))
            throw std::invalid_argument("erasure probability must lie in [0, 1)");
    }
}

double packet_size(const Scheme& s) {
    switch (s.kind) {
        case SchemeKind::Alternating: return 1.0;
        case SchemeKind::Replicated: return 1.0;
        case SchemeKind::Split: return 0.5;
        case SchemeKind::Coded: return 1.0 / (2.0 * s.eta);
        case SchemeKind::QueueBased: return 1.0;  // whole frames, like alternating
    }
    return 1.0;
}

double arrival_rate(const Scheme& s, double tau) {
    if (!(tau > 0.0))
        throw std::invalid_argument("inter-frame period tau must be > 0");
    // Round-robin and queue-based dispatch one frame per tau split between
    // the two paths; synchronized schemes put a packet on each path per tau.
    if (s.kind == SchemeKind::Alternating || s.kind == SchemeKind::QueueBased)
        return 1.0 / (2.0 * tau);
    return 1.0 / tau;
}

static int path_slot(int path_index) {
    if (path_index != 1 && path_index != 2)
        throw std::invalid_argument("path_index must be 1 or 2");
    return path_index - 1;
}

double path_load(const SystemConfig& cfg, int path_index) {
    const int j = path_slot(path_index);
    return packet_size(cfg.scheme) * arrival_rate(cfg.scheme, cfg.tau) /
           cfg.paths[j].mu;
}

double effective_service_rate(const SystemConfig& cfg, int path_index) {
    const int j = path_slot(path_index);
    return cfg.paths[j].mu / packet_size(cfg.scheme);
}

double sigma_exponent(const SystemConfig& cfg, int path_index) {
    return effective_service_rate(cfg, path_index) /
           arrival_rate(cfg.scheme, cfg.tau);
}

StabilityReport check_stability(const SystemConfig& cfg) {
    validate(cfg);
    StabilityReport rep;
    rep.load = {path_load(cfg, 1), path_load(cfg, 2)};
    rep.stable = rep.load[0] < 1.0 && rep.load[1] < 1.0;
    if (rep.stable) {
        rep.message = "stable";
        return rep;
    }
    std::ostringstream msg;
    msg << "unstable " << to_string(cfg.scheme.kind) << " config:";
    for (int j = 0; j < 2; ++j) {
        if (rep.load[j] >= 1.0)
            msg << " path " << (j + 1) << " load rho=" << rep.load[j] << " >= 1;";
    }
    msg << " require L*lambda/mu < 1 on both paths";
    rep.message = msg.str();
    return rep;
}

void require_stable(const SystemConfig& cfg) {
    const StabilityReport rep = check_stability(cfg);
    if (!rep.stable) throw std::domain_error(rep.message);
}

}  // namespace dm2
