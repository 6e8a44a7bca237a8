// Monte Carlo of the two-path system under all five schedulers.
//
// Arrivals are deterministic (frame i at i*tau) and each path serves FCFS,
// so per-path dynamics reduce to the Lindley recursion
//   d_k = max(a_k, d_{k-1}) + S_k,  S_k ~ Exp(mu_j / L).
// The queue-based scheduler additionally observes both paths' in-system
// packet counts immediately before each arrival.
//
// Erased packets still consume their service time (the loss happens at the
// receiver), so queue dynamics do not depend on the erasure rates. Service
// and erasure draws come from four separately seeded streams (service path
// 1/2, erasure path 1/2); toggling epsilon therefore never changes the
// delivery time of a non-erased packet.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dm2/model.hpp"

namespace dm2 {

enum class PacketStatus : std::uint8_t { Delivered, Erased, NotSent };

struct PathOutcome {
    PacketStatus status = PacketStatus::NotSent;
    double time = 0.0;  // delivery time; 0 unless status == Delivered

    bool operator==(const PathOutcome&) const = default;
};

struct FrameRecord {
    std::uint64_t index = 0;
    double gen_time = 0.0;
    std::array<PathOutcome, 2> path{};

    bool operator==(const FrameRecord&) const = default;
};

inline constexpr std::uint64_t kDefaultWarmup = 1000;

// records keeps every generated frame, warm-up included; extraction skips
// the first warmup_trimmed frames.
struct FrameTrace {
    SystemConfig config;
    std::uint64_t seed = 0;
    std::uint64_t warmup_trimmed = kDefaultWarmup;
    bool unstable = false;  // growing-queue warning, run is still valid
    std::vector<FrameRecord> records;
};

// Deterministic in (cfg, n_frames, seed, warmup). Unstable configs run and
// only set the warning flag. Requires n_frames >= 2000 and > warmup.
FrameTrace run(const SystemConfig& cfg, std::uint64_t n_frames,
               std::uint64_t seed, std::uint64_t warmup = kDefaultWarmup);

// How PAoI samples are taken from the reception process.
//  Display: walk receptions in time order; a reception is informative iff
//    its frame is fresher than the one on display; stale receptions are
//    discarded. This is the true display age.
//  PerSuccess: every successful frame counts, in generation order, against
//    the previous successful frame. This is the sampling convention of the
//    synchronized-scheme convolution analysis; it coincides with Display
//    whenever receptions cannot overtake (max-type qualities, or no
//    erasures), and differs for min-type qualities with erasures.
enum class AgeSemantics { Display, PerSuccess };

// Latency samples of frames delivered at the requested quality, in frame
// order, warm-up excluded. Quality must fit the scheme: Whole for
// alternating/queue-based, Whole or LQ for replicated (first copy), Whole
// or HQ for split (both halves), LQ/HQ for coded.
std::vector<double> extract_latencies(const FrameTrace& trace, Quality quality);

// Peak-age samples at the requested quality; same quality rules.
std::vector<double> extract_paoi(const FrameTrace& trace, Quality quality,
                                 AgeSemantics semantics = AgeSemantics::Display);

// One row per frame: index,gen_time,path1_status,path1_time,path2_status,
// path2_time with status in {delivered,erased,notsent} and empty time
// fields when not delivered.
void write_trace_csv(const FrameTrace& trace, std::ostream& out);

}  // namespace dm2
