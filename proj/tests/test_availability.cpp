#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "edgesched/availability.hpp"
#include "edgesched/exact_usage.hpp"
#include "edgesched/rng.hpp"
#include "helpers.hpp"

using namespace edgesched;
using namespace edgesched::testing;

namespace {

Device four_core() { return Device{0, 4}; }

void check_list_invariants(const AvailabilityList& list) {
    for (const auto& track : list.tracks()) {
        for (std::size_t i = 0; i < track.size(); ++i) {
            CHECK(track[i].duration() >= list.min_duration());
            if (i > 0)
                CHECK(track[i - 1].t2 <= track[i].t1);  // disjoint, sorted
        }
    }
}

} // namespace

TEST_CASE("full lists hold one horizon window per track") {
    const TimeWindow horizon{0, 1000};
    DeviceAvailability dev(four_core(), horizon);

    const auto& lp2 = dev.list(ConfigKind::LowPriority2Core);
    CHECK(lp2.track_count() == 2);
    for (const auto& track : lp2.tracks()) {
        REQUIRE(track.size() == 1);
        CHECK(track[0] == horizon);
    }

    const auto& lp4 = dev.list(ConfigKind::LowPriority4Core);
    CHECK(lp4.track_count() == 1);
    REQUIRE(lp4.tracks()[0].size() == 1);
    CHECK(lp4.tracks()[0][0] == horizon);

    const auto& hp = dev.list(ConfigKind::HighPriority);
    CHECK(hp.track_count() == 4);
    for (const auto& track : hp.tracks())
        REQUIRE(track.size() == 1);
}

TEST_CASE("list construction rejects bad parameters") {
    CHECK_THROWS_AS(AvailabilityList(0, ConfigKind::LowPriority2Core, 3, 5.0, 4,
                                     TimeWindow{0, 100}),
                    std::invalid_argument);  // 4 % 3 != 0
    CHECK_THROWS_AS(AvailabilityList(0, ConfigKind::LowPriority2Core, 2, 50.0, 4,
                                     TimeWindow{0, 10}),
                    std::invalid_argument);  // horizon shorter than min duration
}

TEST_CASE("find_window returns the first containing window") {
    AvailabilityList list(0, ConfigKind::LowPriority2Core, 2, 2.0, 4,
                          TimeWindow{0, 100});

    SUBCASE("containment in a full window") {
        const auto hit = list.find_window(TimeWindow{10.0, 26.862});
        REQUIRE(hit.has_value());
        CHECK(hit->track == 0);
        CHECK(hit->window == TimeWindow{0, 100});
    }

    SUBCASE("first track fails containment, second succeeds") {
        // shape the staircase: track0 = [0,5), track1 = [0,100)
        list.subtract(TimeWindow{5, 100}, 1);
        REQUIRE(list.tracks()[0].size() == 1);
        CHECK(list.tracks()[0][0] == TimeWindow{0, 5});
        CHECK(list.tracks()[1][0] == TimeWindow{0, 100});

        const auto hit = list.find_window(TimeWindow{10, 30});
        REQUIRE(hit.has_value());
        CHECK(hit->track == 1);
        CHECK(hit->window == TimeWindow{0, 100});

        const auto oracle = find_window_by_scan(list, TimeWindow{10, 30});
        REQUIRE(oracle.has_value());
        CHECK(oracle->track == hit->track);
        CHECK(oracle->window == hit->window);
    }

    SUBCASE("no capacity anywhere") {
        list.subtract(TimeWindow{0, 100}, 2);
        CHECK_FALSE(list.find_window(TimeWindow{0, 10}).has_value());
    }
}

TEST_CASE("find_window agrees with the scan oracle on random states") {
    Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        AvailabilityList list(0, ConfigKind::HighPriority, 1, 1.0, 4,
                              TimeWindow{0, 200});
        const int cuts = 1 + static_cast<int>(rng.pick(6));
        for (int c = 0; c < cuts; ++c) {
            const double a = rng.uniform() * 180.0;
            const double b = a + 0.5 + rng.uniform() * 30.0;
            list.subtract(TimeWindow{a, std::min(b, 200.0)},
                          1 + static_cast<int>(rng.pick(4)));
        }
        check_list_invariants(list);
        for (int q = 0; q < 20; ++q) {
            const double a = rng.uniform() * 195.0;
            const double b = a + 1.0 + rng.uniform() * 20.0;
            const TimeWindow desired{a, std::min(b, 200.0)};
            const auto fast = list.find_window(desired);
            const auto slow = find_window_by_scan(list, desired);
            REQUIRE(fast.has_value() == slow.has_value());
            if (fast) {
                CHECK(fast->track == slow->track);
                CHECK(fast->window == slow->window);
                CHECK(window_contains(fast->window, desired));
            }
        }
    }
}

TEST_CASE("bisect splits a window around a contained slot") {
    SUBCASE("both remnants survive") {
        const auto parts = bisect(TimeWindow{0, 100}, TimeWindow{10, 30}, 5.0);
        REQUIRE(parts.size() == 2);
        CHECK(parts[0] == TimeWindow{0, 10});
        CHECK(parts[1] == TimeWindow{30, 100});
    }
    SUBCASE("slot equals window") {
        CHECK(bisect(TimeWindow{0, 100}, TimeWindow{0, 100}, 5.0).empty());
    }
    SUBCASE("short remnant is dropped") {
        const auto parts = bisect(TimeWindow{0, 20}, TimeWindow{5, 18}, 5.0);
        REQUIRE(parts.size() == 1);
        CHECK(parts[0] == TimeWindow{0, 5});
    }
    SUBCASE("containment precondition enforced") {
        CHECK_THROWS_AS(bisect(TimeWindow{0, 10}, TimeWindow{5, 15}, 1.0),
                        std::logic_error);
    }
}

TEST_CASE("bisect fragment accounting") {
    Rng rng(33);
    for (int trial = 0; trial < 1000; ++trial) {
        const double w1 = rng.uniform() * 50.0;
        const double w2 = w1 + 1.0 + rng.uniform() * 100.0;
        const double s1 = w1 + rng.uniform() * (w2 - w1 - 0.5);
        const double s2 = s1 + 0.1 + rng.uniform() * (w2 - s1 - 0.1);
        const double min_dur = rng.uniform() * 20.0 + 0.01;
        const TimeWindow window{w1, w2};
        const TimeWindow slot{s1, std::min(s2, w2)};
        const auto parts = bisect(window, slot, min_dur);
        double kept = 0.0;
        for (const TimeWindow& p : parts) {
            CHECK_FALSE(windows_overlap(p, slot));
            CHECK(p.duration() >= min_dur);
            kept += p.duration();
        }
        const double left = slot.t1 - window.t1;
        const double right = window.t2 - slot.t2;
        double expected = 0.0;
        if (left >= min_dur) expected += left;
        if (right >= min_dur) expected += right;
        CHECK(kept == doctest::Approx(expected));
        CHECK(kept <= window.duration() - slot.duration() + 1e-12);
    }
}

TEST_CASE("write-through splits one lane per list and leaves the rest") {
    // the shape of the worked example, with a min duration small enough for
    // every fragment to survive
    AvailabilityList lp2(0, ConfigKind::LowPriority2Core, 2, 5.0, 4,
                         TimeWindow{0, 100});
    AvailabilityList lp4(0, ConfigKind::LowPriority4Core, 4, 5.0, 4,
                         TimeWindow{0, 100});
    const TimeWindow slot{10, 26.9};
    lp2.subtract(slot, 1);
    lp4.subtract(slot, 1);

    REQUIRE(lp2.tracks()[0].size() == 2);
    CHECK(lp2.tracks()[0][0] == TimeWindow{0, 10});
    CHECK(lp2.tracks()[0][1] == TimeWindow{26.9, 100});
    REQUIRE(lp2.tracks()[1].size() == 1);
    CHECK(lp2.tracks()[1][0] == TimeWindow{0, 100});

    REQUIRE(lp4.tracks()[0].size() == 2);
    CHECK(lp4.tracks()[0][0] == TimeWindow{0, 10});
    CHECK(lp4.tracks()[0][1] == TimeWindow{26.9, 100});
}

TEST_CASE("record_allocation writes through every list at real durations") {
    DeviceAvailability dev(four_core(), TimeWindow{0, 100});
    const Allocation alloc{1, 0, 2, TimeWindow{10, 26.9}, std::nullopt, 1};
    dev.record_allocation(alloc);

    // fragments shorter than each list's min duration disappear
    const auto& lp2 = dev.list(ConfigKind::LowPriority2Core);
    REQUIRE(lp2.tracks()[0].size() == 1);
    CHECK(lp2.tracks()[0][0] == TimeWindow{26.9, 100});
    CHECK(lp2.tracks()[1][0] == TimeWindow{0, 100});

    const auto& lp4 = dev.list(ConfigKind::LowPriority4Core);
    REQUIRE(lp4.tracks()[0].size() == 1);
    CHECK(lp4.tracks()[0][0] == TimeWindow{26.9, 100});

    // a 2-core task costs two lanes in the one-core list
    const auto& hp = dev.list(ConfigKind::HighPriority);
    REQUIRE(hp.tracks()[0].size() == 2);
    CHECK(hp.tracks()[0][0] == TimeWindow{0, 10});
    CHECK(hp.tracks()[0][1] == TimeWindow{26.9, 100});
    CHECK(hp.tracks()[1].size() == 2);
    CHECK(hp.tracks()[2].size() == 1);
    CHECK(hp.tracks()[3].size() == 1);

    for (ConfigKind k : kAllConfigKinds)
        check_list_invariants(dev.list(k));
}

TEST_CASE("allocating the whole horizon empties every list") {
    DeviceAvailability dev(four_core(), TimeWindow{0, 100});
    dev.record_allocation(Allocation{1, 0, 4, TimeWindow{0, 100}, std::nullopt, 1});
    for (ConfigKind k : kAllConfigKinds)
        for (const auto& track : dev.list(k).tracks())
            CHECK(track.empty());

    // nothing left to bisect: a second write is a no-op
    dev.record_allocation(Allocation{2, 0, 2, TimeWindow{20, 40}, std::nullopt, 2});
    for (ConfigKind k : kAllConfigKinds)
        for (const auto& track : dev.list(k).tracks())
            CHECK(track.empty());
}

TEST_CASE("rebuild reproduces the incremental write-through state") {
    Rng rng(55);
    for (int trial = 0; trial < 300; ++trial) {
        DeviceAvailability dev(four_core(), TimeWindow{0, 400});
        const int n = 1 + static_cast<int>(rng.pick(8));
        for (int i = 0; i < n; ++i) {
            const ConfigKind kind = kAllConfigKinds[rng.pick(3)];
            const TaskConfig cfg = TaskConfig::make(kind);
            const double start = rng.uniform() * 350.0;
            dev.record_allocation(Allocation{
                static_cast<TaskId>(i + 1), 0, cfg.cores,
                TimeWindow{start, start + cfg.effective_duration()}, std::nullopt,
                static_cast<std::uint64_t>(i + 1)});
        }
        std::string incremental;
        for (ConfigKind k : kAllConfigKinds)
            incremental += dump_tracks(dev.list(k));
        dev.rebuild();
        std::string rebuilt;
        for (ConfigKind k : kAllConfigKinds)
            rebuilt += dump_tracks(dev.list(k));
        CHECK(incremental == rebuilt);
    }
}

TEST_CASE("rebuild of an empty workload equals a fresh list") {
    DeviceAvailability dev(four_core(), TimeWindow{0, 1000});
    const std::string fresh = dev.dump();
    dev.rebuild();
    CHECK(dev.dump() == fresh);
}

TEST_CASE("subtraction order does not change the final window set") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        const ConfigKind ka = kAllConfigKinds[rng.pick(3)];
        const ConfigKind kb = kAllConfigKinds[rng.pick(3)];
        const TaskConfig ca = TaskConfig::make(ka);
        const TaskConfig cb = TaskConfig::make(kb);
        const double a1 = rng.uniform() * 300.0;
        const double b1 = rng.uniform() * 300.0;
        const Allocation a{1, 0, ca.cores,
                           TimeWindow{a1, a1 + ca.effective_duration()},
                           std::nullopt, 1};
        const Allocation b{2, 0, cb.cores,
                           TimeWindow{b1, b1 + cb.effective_duration()},
                           std::nullopt, 2};
        DeviceAvailability ab(four_core(), TimeWindow{0, 400});
        ab.record_allocation(a);
        ab.record_allocation(b);
        DeviceAvailability ba(four_core(), TimeWindow{0, 400});
        ba.record_allocation(b);
        ba.record_allocation(a);
        CHECK(ab.dump() == ba.dump());
    }
}

TEST_CASE("feasible windows never overcommit the device") {
    Rng rng(99);
    int allocations_checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        DeviceAvailability dev(four_core(), TimeWindow{0, 400});
        TaskId next_id = 1;
        for (int step = 0; step < 24; ++step) {
            const std::size_t op = rng.pick(10);
            if (op < 7 || dev.active_workload().empty()) {
                const ConfigKind kind = kAllConfigKinds[rng.pick(3)];
                const TaskConfig cfg = TaskConfig::make(kind);
                const double start = rng.uniform() * 360.0;
                const TimeWindow desired{start, start + cfg.effective_duration()};
                if (desired.t2 > 400.0)
                    continue;
                const auto found = dev.find_window(kind, desired);
                if (!found)
                    continue;
                CHECK(window_contains(found->window, desired));
                // the abstraction must be conservative w.r.t. true core usage
                const bool ok = fits_exactly(dev.active_workload(), 4, cfg.cores,
                                             desired);
                CHECK(ok);
                if (!ok)
                    continue;
                dev.record_allocation(Allocation{next_id, 0, cfg.cores, desired,
                                                 std::nullopt, next_id});
                ++next_id;
                ++allocations_checked;
            } else {
                // preemption path: drop a random task and rebuild
                const auto& wl = dev.active_workload();
                const TaskId victim = wl[rng.pick(wl.size())].task;
                dev.release(victim);
                dev.rebuild();
            }
            for (ConfigKind k : kAllConfigKinds)
                check_list_invariants(dev.list(k));
        }
    }
    CHECK(allocations_checked > 1000);
}

TEST_CASE("release without rebuild does not resurrect capacity") {
    DeviceAvailability dev(four_core(), TimeWindow{0, 100});
    dev.record_allocation(Allocation{1, 0, 4, TimeWindow{10, 30}, std::nullopt, 1});
    const std::string before = dev.dump();
    REQUIRE(dev.release(1));
    CHECK(dev.dump() == before);  // the freed span stays hidden until rebuild
    dev.rebuild();
    const auto hit = dev.find_window(ConfigKind::LowPriority4Core,
                                     TimeWindow{10, 21.7});
    CHECK(hit.has_value());
}

TEST_CASE("horizon extension merges with trailing free space") {
    DeviceAvailability dev(four_core(), TimeWindow{0, 100});
    dev.extend_horizon(250.0);
    const auto& lp2 = dev.list(ConfigKind::LowPriority2Core);
    REQUIRE(lp2.tracks()[0].size() == 1);
    CHECK(lp2.tracks()[0][0] == TimeWindow{0, 250});

    // a slot spanning the old boundary must be found after the merge
    const auto hit = dev.find_window(ConfigKind::LowPriority2Core,
                                     TimeWindow{95, 115});
    REQUIRE(hit.has_value());
    CHECK(hit->window == TimeWindow{0, 250});

    dev.record_allocation(Allocation{1, 0, 2, TimeWindow{95, 115}, std::nullopt, 1});
    dev.extend_horizon(300.0);
    REQUIRE(lp2.tracks()[0].size() == 2);
    CHECK(lp2.tracks()[0][1] == TimeWindow{115, 300});
}
