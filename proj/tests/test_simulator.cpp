#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dm2/latency.hpp"
#include "dm2/simulator.hpp"
#include "dm2/stats.hpp"

using namespace dm2;

namespace {

SystemConfig config(Scheme s, double tau, double mu1, double mu2,
                    double e1 = 0.0, double e2 = 0.0) {
    return {s, tau, {PathParams{mu1, e1}, PathParams{mu2, e2}}};
}

}  // namespace

TEST_CASE("determinism: identical inputs give identical traces") {
    const auto cfg = config(Scheme::coded(0.75), 1.5, 1.0, 1.3, 0.1, 0.2);
    const FrameTrace a = run(cfg, 20000, 7);
    const FrameTrace b = run(cfg, 20000, 7);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.records == b.records);
    const FrameTrace c = run(cfg, 20000, 8);
    CHECK(a.records != c.records);
}

TEST_CASE("replicated error-free structure") {
    const auto cfg = config(Scheme::replicated(), 1.5, 1.0, 1.0);
    const FrameTrace tr = run(cfg, 20000, 11);
    CHECK_FALSE(tr.unstable);
    double last[2] = {0.0, 0.0};
    for (const auto& rec : tr.records) {
        for (int j = 0; j < 2; ++j) {
            REQUIRE(rec.path[j].status == PacketStatus::Delivered);
            // delivery after generation, FCFS order, busy server never idles
            CHECK(rec.path[j].time > std::max(rec.gen_time, last[j]));
            last[j] = rec.path[j].time;
        }
    }
}

TEST_CASE("alternating sends on one path only, round-robin") {
    const auto cfg = config(Scheme::alternating(), 1.0, 1.0, 1.0);
    const FrameTrace tr = run(cfg, 2000, 3);
    for (const auto& rec : tr.records) {
        const int sent = rec.index % 2 == 0 ? 0 : 1;
        CHECK(rec.path[sent].status == PacketStatus::Delivered);
        CHECK(rec.path[1 - sent].status == PacketStatus::NotSent);
    }
}

TEST_CASE("erasure fraction matches the channel rate") {
    const auto cfg = config(Scheme::replicated(), 1.5, 1.0, 1.0, 0.2, 0.2);
    const FrameTrace tr = run(cfg, 1'000'000, 5);
    std::uint64_t both_gone = 0, counted = 0;
    for (const auto& rec : tr.records) {
        if (rec.index < tr.warmup_trimmed) continue;
        ++counted;
        if (rec.path[0].status == PacketStatus::Erased &&
            rec.path[1].status == PacketStatus::Erased)
            ++both_gone;
    }
    const double frac = static_cast<double>(both_gone) / counted;
    const double sigma3 = 3.0 * std::sqrt(0.04 * 0.96 / counted);
    CHECK(std::abs(frac - 0.04) < sigma3);
}

TEST_CASE("toggling erasures leaves delivery times untouched") {
    const auto clean = config(Scheme::split(), 1.5, 1.0, 1.3);
    const auto noisy = config(Scheme::split(), 1.5, 1.0, 1.3, 0.25, 0.1);
    const FrameTrace a = run(clean, 20000, 99);
    const FrameTrace b = run(noisy, 20000, 99);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        for (int j = 0; j < 2; ++j) {
            if (b.records[i].path[j].status == PacketStatus::Delivered)
                CHECK(b.records[i].path[j].time == a.records[i].path[j].time);
        }
    }
}

TEST_CASE("coded extremes are byte-identical to replicated and split") {
    const auto rep = run(config(Scheme::replicated(), 1.5, 1.0, 1.0, 0.2, 0.2),
                         20000, 17);
    const auto c05 = run(config(Scheme::coded(0.5), 1.5, 1.0, 1.0, 0.2, 0.2),
                         20000, 17);
    CHECK(rep.records == c05.records);
    const auto spl = run(config(Scheme::split(), 1.5, 1.0, 1.0, 0.2, 0.2),
                         20000, 17);
    const auto c10 = run(config(Scheme::coded(1.0), 1.5, 1.0, 1.0, 0.2, 0.2),
                         20000, 17);
    CHECK(spl.records == c10.records);
}

TEST_CASE("queue-based dispatch picks the shorter queue") {
    const auto cfg = config(Scheme::queue_based(), 1.0, 1.0, 1.0);
    const FrameTrace tr = run(cfg, 5000, 23);
    // recompute in-system counts from the trace and check every decision
    std::vector<std::pair<double, int>> departures;  // (time, path)
    for (const auto& rec : tr.records) {
        for (int j = 0; j < 2; ++j)
            if (rec.path[j].status != PacketStatus::NotSent)
                CHECK((rec.path[j].status == PacketStatus::Delivered));
    }
    std::vector<double> dep[2];
    for (const auto& rec : tr.records) {
        int sent = rec.path[0].status != PacketStatus::NotSent ? 0 : 1;
        std::size_t q[2];
        for (int j = 0; j < 2; ++j) {
            auto& d = dep[j];
            q[j] = d.size() -
                   (std::upper_bound(d.begin(), d.end(), rec.gen_time) -
                    d.begin());
        }
        if (q[0] < q[1]) CHECK(sent == 0);
        if (q[1] < q[0]) CHECK(sent == 1);
        if (q[0] == q[1]) CHECK(sent == 0);  // tie at equal mu: path 1
        dep[sent].push_back(rec.path[sent].time);
    }

    // with a faster path 2, ties go there
    const FrameTrace fast2 = run(config(Scheme::queue_based(), 1.0, 1.0, 2.0),
                                 2000, 23);
    CHECK(fast2.records[0].path[1].status == PacketStatus::Delivered);
    CHECK(fast2.records[0].path[0].status == PacketStatus::NotSent);
}

TEST_CASE("unstable configs run with a warning") {
    const auto cfg = config(Scheme::replicated(), 0.75, 1.0, 1.0);
    const FrameTrace tr = run(cfg, 5000, 3);
    CHECK(tr.unstable);
    CHECK(tr.records.size() == 5000);
}

TEST_CASE("run validates inputs") {
    const auto cfg = config(Scheme::replicated(), 1.5, 1.0, 1.0);
    CHECK_THROWS_AS(run(cfg, 1500, 1), std::invalid_argument);
    CHECK_THROWS_AS(run(cfg, 2000, 1, 2000), std::invalid_argument);
    CHECK_THROWS_AS(run(config(Scheme::coded(0.3), 1.5, 1.0, 1.0), 5000, 1),
                    std::invalid_argument);
}

TEST_CASE("extract_latencies per quality") {
    const auto rep = run(config(Scheme::replicated(), 1.5, 1.0, 1.0), 5000, 31);
    const auto lat = extract_latencies(rep, Quality::Whole);
    CHECK(lat.size() == 5000 - rep.warmup_trimmed);  // no erasures: all frames
    std::size_t i = 0;
    for (const auto& rec : rep.records) {
        if (rec.index < rep.warmup_trimmed) continue;
        const double want =
            std::min(rec.path[0].time, rec.path[1].time) - rec.gen_time;
        CHECK(lat[i++] == want);
    }

    const auto spl = run(config(Scheme::split(), 1.5, 1.0, 1.0, 0.3, 0.3),
                         20000, 31);
    const auto hq = extract_latencies(spl, Quality::Whole);
    std::size_t survivors = 0;
    for (const auto& rec : spl.records) {
        if (rec.index < spl.warmup_trimmed) continue;
        if (rec.path[0].status == PacketStatus::Delivered &&
            rec.path[1].status == PacketStatus::Delivered)
            ++survivors;
    }
    CHECK(hq.size() == survivors);  // both halves required

    CHECK_THROWS_AS(extract_latencies(rep, Quality::HQ), std::invalid_argument);
    CHECK_THROWS_AS(extract_latencies(spl, Quality::LQ), std::invalid_argument);
    const auto alt = run(config(Scheme::alternating(), 1.0, 1.0, 1.0), 5000, 1);
    CHECK_THROWS_AS(extract_latencies(alt, Quality::LQ), std::invalid_argument);
}

TEST_CASE("extract_paoi: error-free synchronized ages are latency plus tau") {
    const auto tr = run(config(Scheme::replicated(), 1.5, 1.0, 1.0), 5000, 37);
    const auto lat = extract_latencies(tr, Quality::Whole);
    for (AgeSemantics sem : {AgeSemantics::Display, AgeSemantics::PerSuccess}) {
        const auto ages = extract_paoi(tr, Quality::Whole, sem);
        REQUIRE(ages.size() == lat.size());
        for (std::size_t i = 0; i < ages.size(); ++i)
            CHECK(ages[i] == doctest::Approx(lat[i] + 1.5).epsilon(1e-12));
    }
}

TEST_CASE("extract_paoi: display walk discards stale receptions") {
    const auto tr = run(config(Scheme::alternating(), 1.0, 1.0, 1.0), 50000, 41);
    const auto ages = extract_paoi(tr, Quality::Whole);

    // replay the walk here as an independent reference
    std::vector<std::pair<double, double>> ev;  // (recv, gen)
    for (const auto& rec : tr.records) {
        const int sent = rec.index % 2 == 0 ? 0 : 1;
        ev.emplace_back(rec.path[sent].time, rec.gen_time);
    }
    std::sort(ev.begin(), ev.end());
    std::vector<double> want;
    double disp = -1.0;
    std::uint64_t stale = 0;
    for (const auto& [recv, gen] : ev) {
        if (disp < 0.0) {
            disp = gen;
            continue;
        }
        if (gen <= disp) {
            ++stale;
            continue;
        }
        if (gen >= tr.warmup_trimmed * 1.0) want.push_back(recv - disp);
        disp = gen;
    }
    CHECK(stale > 0);  // out-of-order arrivals do happen at this load
    REQUIRE(ages.size() == want.size());
    for (std::size_t i = 0; i < ages.size(); ++i) CHECK(ages[i] == want[i]);

    // a frame overtaken by its successor spans at least two periods
    for (double a : ages) CHECK(a > 1.0);
    std::uint64_t over = 0;
    for (double a : ages)
        if (a >= 2.0) ++over;
    CHECK(over > 0);
}

TEST_CASE("extract_paoi semantics differ only via staleness") {
    // min-type with erasures: stale receptions exist, the per-success count
    // is strictly larger
    const auto tr = run(config(Scheme::replicated(), 1.5, 1.0, 1.0, 0.2, 0.2),
                        200000, 43);
    const auto display = extract_paoi(tr, Quality::Whole, AgeSemantics::Display);
    const auto per_success =
        extract_paoi(tr, Quality::Whole, AgeSemantics::PerSuccess);
    CHECK(display.size() < per_success.size());

    // max-type receptions are monotone: both agree exactly
    const auto spl = run(config(Scheme::split(), 1.5, 1.0, 1.0, 0.2, 0.2),
                         200000, 43);
    const auto d2 = extract_paoi(spl, Quality::Whole, AgeSemantics::Display);
    const auto p2 = extract_paoi(spl, Quality::Whole, AgeSemantics::PerSuccess);
    CHECK(d2 == p2);
}

TEST_CASE("trace CSV layout") {
    const auto tr = run(config(Scheme::alternating(), 0.75, 1.0, 1.0, 0.0, 0.9),
                        2000, 2);
    std::ostringstream out;
    write_trace_csv(tr, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "index,gen_time,path1_status,path1_time,path2_status,path2_time");
    std::getline(in, line);
    CHECK(line.rfind("0,0,delivered,", 0) == 0);  // frame 0 on path 1
    std::getline(in, line);
    const bool erased = line.rfind("1,0.75,notsent,,erased,", 0) == 0;
    const bool delivered = line.rfind("1,0.75,notsent,,delivered,", 0) == 0;
    CHECK((erased || delivered));
}

TEST_CASE("simulated latency matches the alternating law") {
    const auto cfg = config(Scheme::alternating(), 1.0, 1.0, 1.0);
    const FrameTrace tr = run(cfg, 1'000'000, 4242);
    const EmpiricalDistribution emp(extract_latencies(tr, Quality::Whole));
    CHECK(ks_distance(emp, alt_latency(cfg)) < 0.01);
}
