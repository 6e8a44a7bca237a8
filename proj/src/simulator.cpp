#include "dm2/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <ostream>
#include <random>
#include <stdexcept>

namespace dm2 {

namespace {

// One documented RNG stream: stream ids 0/1 are service draws for paths
// 1/2, ids 2/3 the erasure draws. Streams are independent so erasure
// settings never perturb service times.
class UniformStream {
public:
    UniformStream(std::uint64_t seed, std::uint32_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32), stream};
        engine_.seed(seq);
    }

    // Uniform on (0,1), both ends excluded.
    double next() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

enum class SampleMode { Single, Min, Max };

SampleMode sample_mode(const Scheme& scheme, Quality quality) {
    switch (scheme.kind) {
        case SchemeKind::Alternating:
        case SchemeKind::QueueBased:
            if (quality != Quality::Whole)
                throw std::invalid_argument(
                    std::string(to_string(scheme.kind)) +
                    " frames have only Whole quality");
            return SampleMode::Single;
        case SchemeKind::Replicated:
            if (quality == Quality::HQ)
                throw std::invalid_argument("replicated has no HQ quality");
            return SampleMode::Min;
        case SchemeKind::Split:
            if (quality == Quality::LQ)
                throw std::invalid_argument("split has no LQ quality");
            return SampleMode::Max;
        case SchemeKind::Coded:
            if (quality == Quality::Whole)
                throw std::invalid_argument(
                    "coded frames have LQ/HQ qualities, not Whole");
            return quality == Quality::HQ ? SampleMode::Max : SampleMode::Min;
    }
    throw std::invalid_argument("unknown scheme");
}

// Reception time of a frame at the requested quality, NaN when the frame
// did not reach it.
double reception_time(const FrameRecord& rec, SampleMode mode) {
    const auto& p = rec.path;
    const bool d0 = p[0].status == PacketStatus::Delivered;
    const bool d1 = p[1].status == PacketStatus::Delivered;
    switch (mode) {
        case SampleMode::Single:
            for (const auto& out : p)
                if (out.status == PacketStatus::Delivered) return out.time;
            return std::numeric_limits<double>::quiet_NaN();
        case SampleMode::Min:
            if (d0 && d1) return std::min(p[0].time, p[1].time);
            if (d0) return p[0].time;
            if (d1) return p[1].time;
            return std::numeric_limits<double>::quiet_NaN();
        case SampleMode::Max:
            if (d0 && d1) return std::max(p[0].time, p[1].time);
            return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

FrameTrace run(const SystemConfig& cfg, std::uint64_t n_frames,
               std::uint64_t seed, std::uint64_t warmup) {
    validate(cfg);
    if (n_frames < 2000 || n_frames <= warmup)
        throw std::invalid_argument(
            "n_frames must be at least 2000 and exceed the warm-up count");

    FrameTrace trace;
    trace.config = cfg;
    trace.seed = seed;
    trace.warmup_trimmed = warmup;
    trace.unstable = !check_stability(cfg).stable;
    trace.records.resize(n_frames);

    UniformStream service[2] = {{seed, 0}, {seed, 1}};
    UniformStream erasure[2] = {{seed, 2}, {seed, 3}};
    const double L = packet_size(cfg.scheme);
    const double rate[2] = {cfg.paths[0].mu / L, cfg.paths[1].mu / L};
    const bool queue_based = cfg.scheme.kind == SchemeKind::QueueBased;
    double last_departure[2] = {0.0, 0.0};
    std::deque<double> in_system[2];  // outstanding departures (queue-based)

    for (std::uint64_t i = 0; i < n_frames; ++i) {
        FrameRecord& rec = trace.records[i];
        rec.index = i;
        rec.gen_time = static_cast<double>(i) * cfg.tau;

        int first = 0, last = 1;
        if (cfg.scheme.kind == SchemeKind::Alternating) {
            first = last = (i % 2 == 0) ? 0 : 1;
        } else if (queue_based) {
            // Queue lengths observed immediately before the frame joins;
            // ties go to the faster path, then path 1.
            for (auto& q : in_system)
                while (!q.empty() && q.front() <= rec.gen_time) q.pop_front();
            int pick;
            if (in_system[0].size() != in_system[1].size())
                pick = in_system[0].size() < in_system[1].size() ? 0 : 1;
            else
                pick = cfg.paths[1].mu > cfg.paths[0].mu ? 1 : 0;
            first = last = pick;
        }

        for (int j = first; j <= last; ++j) {
            const double u = service[j].next();
            const double svc = -std::log(1.0 - u) / rate[j];
            const double start = std::max(rec.gen_time, last_departure[j]);
            const double depart = start + svc;
            // work conservation: service begins at arrival or at the
            // previous departure, whichever is later, never after
            assert(svc > 0.0);
            assert(depart > rec.gen_time && depart > last_departure[j]);
            last_departure[j] = depart;
            const bool erased = erasure[j].next() < cfg.paths[j].epsilon;
            rec.path[j] = erased ? PathOutcome{PacketStatus::Erased, 0.0}
                                 : PathOutcome{PacketStatus::Delivered, depart};
            if (queue_based) in_system[j].push_back(depart);
        }
    }
    return trace;
}

std::vector<double> extract_latencies(const FrameTrace& trace, Quality quality) {
    const SampleMode mode = sample_mode(trace.config.scheme, quality);
    std::vector<double> out;
    out.reserve(trace.records.size());
    for (const auto& rec : trace.records) {
        if (rec.index < trace.warmup_trimmed) continue;
        const double t = reception_time(rec, mode);
        if (!std::isnan(t)) out.push_back(t - rec.gen_time);
    }
    return out;
}

std::vector<double> extract_paoi(const FrameTrace& trace, Quality quality,
                                 AgeSemantics semantics) {
    const SampleMode mode = sample_mode(trace.config.scheme, quality);
    std::vector<double> out;
    out.reserve(trace.records.size());

    if (semantics == AgeSemantics::PerSuccess) {
        // Every successful frame against the previous successful frame, in
        // generation order (the convolution model's sampling convention).
        double prev_gen = 0.0;
        bool has_prev = false;
        for (const auto& rec : trace.records) {
            const double t = reception_time(rec, mode);
            if (std::isnan(t)) continue;
            if (has_prev && rec.index >= trace.warmup_trimmed)
                out.push_back(t - prev_gen);
            prev_gen = rec.gen_time;
            has_prev = true;
        }
        return out;
    }

    // Display semantics: walk receptions in time order, record the age
    // right before each informative reception, discard stale ones.
    struct Event {
        double recv;
        double gen;
        std::uint64_t index;
    };
    std::vector<Event> events;
    events.reserve(trace.records.size());
    for (const auto& rec : trace.records) {
        const double t = reception_time(rec, mode);
        if (!std::isnan(t)) events.push_back({t, rec.gen_time, rec.index});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.recv != b.recv ? a.recv < b.recv : a.gen < b.gen;
    });
    double displayed_gen = 0.0;
    bool has_display = false;
    for (const auto& ev : events) {
        if (!has_display) {
            displayed_gen = ev.gen;
            has_display = true;
            continue;
        }
        if (ev.gen <= displayed_gen) continue;  // stale
        if (ev.index >= trace.warmup_trimmed)
            out.push_back(ev.recv - displayed_gen);
        displayed_gen = ev.gen;
    }
    return out;
}

void write_trace_csv(const FrameTrace& trace, std::ostream& out) {
    out << "index,gen_time,path1_status,path1_time,path2_status,path2_time\n";
    char buf[64];
    const auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return std::string(buf);
    };
    for (const auto& rec : trace.records) {
        out << rec.index << ',' << fmt(rec.gen_time);
        for (const auto& p : rec.path) {
            switch (p.status) {
                case PacketStatus::Delivered:
                    out << ",delivered," << fmt(p.time);
                    break;
                case PacketStatus::Erased:
                    out << ",erased,";
                    break;
                case PacketStatus::NotSent:
                    out << ",notsent,";
                    break;
            }
        }
        out << '\n';
    }
}

}  // namespace dm2
