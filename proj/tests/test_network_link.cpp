#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "edgesched/network_link.hpp"
#include "edgesched/rng.hpp"
#include "helpers.hpp"

using namespace edgesched;
using namespace edgesched::testing;

TEST_CASE("transfer unit is size over bandwidth") {
    CHECK(compute_transfer_unit(8e6, 8e6) == doctest::Approx(1.0));
    CHECK(compute_transfer_unit(4e6, 8e6) == doctest::Approx(0.5));
    CHECK_THROWS_AS(compute_transfer_unit(0.0, 8e6), std::invalid_argument);
    CHECK_THROWS_AS(compute_transfer_unit(8e6, 0.0), std::invalid_argument);
}

TEST_CASE("link construction rounds the anchor up and tiles the horizon") {
    SUBCASE("anchor rounds up to the next multiple") {
        const NetworkLink link(99.2, 1.0, 4, 2);
        CHECK(link.reasoning_time() == doctest::Approx(100.0));
        const auto& b = link.buckets();
        REQUIRE(b.size() == 6);
        CHECK(b[0].window == TimeWindow{100, 101});
        CHECK(b[0].capacity == 1);
        CHECK(b[3].window == TimeWindow{103, 104});
        CHECK(b[3].capacity == 1);
        CHECK(b[4].window == TimeWindow{104, 108});
        CHECK(b[4].capacity == 4);
        CHECK(b[5].window == TimeWindow{108, 116});
        CHECK(b[5].capacity == 8);
    }
    SUBCASE("an exact multiple needs no rounding") {
        const NetworkLink link(100.0, 1.0, 4, 2);
        CHECK(link.reasoning_time() == doctest::Approx(100.0));
    }
    SUBCASE("geometry scales with the unit") {
        const NetworkLink link(0.0, 2.0, 4, 1);
        CHECK(link.reasoning_time() == doctest::Approx(0.0));
        const auto& b = link.buckets();
        REQUIRE(b.size() == 5);
        for (int i = 0; i < 4; ++i) {
            CHECK(b[static_cast<std::size_t>(i)].window ==
                  TimeWindow{2.0 * i, 2.0 * (i + 1)});
            CHECK(b[static_cast<std::size_t>(i)].capacity == 1);
        }
        CHECK(b[4].window == TimeWindow{8, 16});
        CHECK(b[4].capacity == 4);
    }
    SUBCASE("bucket windows tile the horizon") {
        const NetworkLink link(7.3, 0.4, 4, 10);
        const auto& b = link.buckets();
        for (std::size_t i = 1; i < b.size(); ++i)
            CHECK(b[i].window.t1 == doctest::Approx(b[i - 1].window.t2));
        for (const Bucket& bucket : b)
            CHECK(bucket.window.duration() ==
                  doctest::Approx(bucket.capacity * link.transfer_unit()));
    }
    SUBCASE("only four unit buckets keep the index closed-form") {
        CHECK_THROWS_AS(NetworkLink(0.0, 1.0, 3, 4), std::invalid_argument);
        CHECK_THROWS_AS(NetworkLink(0.0, 1.0, 4, 0), std::invalid_argument);
        CHECK_THROWS_AS(NetworkLink(0.0, 0.0, 4, 4), std::invalid_argument);
    }
}

TEST_CASE("query_index follows the closed-form rule") {
    const NetworkLink link(100.0, 1.0, 4, 4);
    // an exact boundary maps to the next slot
    CHECK(link.query_index(100.0) == 1);
    CHECK(link.query_index(102.5) == 3);
    // deep in the exponential range: base slot 11 lives in bucket 5
    CHECK(link.query_index(110.0) == 5);
    // the past yields a negative index
    CHECK(link.query_index(97.0) < 0);
}

TEST_CASE("query_index equals a linear scan over the bucket windows") {
    Rng rng(13);
    for (int trial = 0; trial < 4000; ++trial) {
        const double unit = 0.05 + rng.uniform() * 5.0;
        const double now = rng.uniform() * 1000.0;
        const int n_exp = 1 + static_cast<int>(rng.pick(14));
        const NetworkLink link(now, unit, 4, n_exp);
        const double span = link.horizon_end() - link.reasoning_time();
        const double t_p =
            link.reasoning_time() + (rng.uniform() * 1.4 - 0.2) * span;
        const int fast = link.query_index(t_p);
        const int scan = bucket_index_by_scan(link, t_p);
        if (scan < 0) {
            CHECK(fast < 0);
        } else if (scan >= static_cast<int>(link.buckets().size())) {
            CHECK(fast >= static_cast<int>(link.buckets().size()));
        } else {
            CHECK(fast == scan);
        }
    }
}

TEST_CASE("find_comm_slot walks forward from the query index") {
    SUBCASE("empty link at the anchor") {
        const NetworkLink link(100.0, 1.0, 4, 4);
        const auto slot = link.find_comm_slot(100.0);
        REQUIRE(slot.has_value());
        CHECK(slot->bucket == 1);
        CHECK(slot->transfer_start == doctest::Approx(101.0));
    }
    SUBCASE("full unit buckets push the slot into the exponential range") {
        NetworkLink link(100.0, 1.0, 4, 4);
        link.reserve(1, CommTask{1, 1, 101.0});
        link.reserve(2, CommTask{2, 2, 102.0});
        link.reserve(3, CommTask{3, 3, 103.0});
        const auto slot = link.find_comm_slot(100.5);
        REQUIRE(slot.has_value());
        CHECK(slot->bucket == 4);
    }
    SUBCASE("a saturated link yields nothing") {
        NetworkLink link(0.0, 1.0, 4, 1);
        for (int i = 0; i < 4; ++i)
            link.reserve(i, CommTask{static_cast<TaskId>(i + 1),
                                     static_cast<std::uint64_t>(i + 1),
                                     static_cast<double>(i)});
        for (int i = 0; i < 4; ++i)
            link.reserve(4, CommTask{static_cast<TaskId>(10 + i),
                                     static_cast<std::uint64_t>(10 + i),
                                     4.0 + i});
        CHECK_FALSE(link.find_comm_slot(0.0).has_value());
    }
    SUBCASE("transfers serialize inside a shared bucket") {
        NetworkLink link(0.0, 1.0, 4, 4);
        const auto first = link.find_comm_slot(4.5);
        REQUIRE(first.has_value());
        CHECK(first->bucket == 4);
        CHECK(first->transfer_start == doctest::Approx(5.0));
        link.reserve(first->bucket, CommTask{1, 1, first->transfer_start});
        const auto second = link.find_comm_slot(4.5);
        REQUIRE(second.has_value());
        CHECK(second->bucket == 4);
        CHECK(second->transfer_start == doctest::Approx(6.0));
    }
}

TEST_CASE("reserve honors bucket capacity") {
    NetworkLink link(0.0, 1.0, 4, 2);
    link.reserve(1, CommTask{1, 1, 1.0});
    CHECK_THROWS_AS(link.reserve(1, CommTask{2, 2, 1.0}), std::runtime_error);

    // capacity-4 bucket takes four transfers, the fifth overflows
    for (int i = 0; i < 4; ++i)
        link.reserve(4, CommTask{static_cast<TaskId>(10 + i),
                                 static_cast<std::uint64_t>(10 + i),
                                 4.0 + i});
    CHECK(link.buckets()[4].occupants.size() == 4);
    CHECK_THROWS_AS(link.reserve(4, CommTask{20, 20, 4.0}), std::runtime_error);

    CHECK(link.release(11, 11));
    CHECK_FALSE(link.release(11, 11));
    link.reserve(4, CommTask{21, 21, 5.0});
}

TEST_CASE("no operation sequence overfills a bucket") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        NetworkLink link(rng.uniform() * 50.0, 0.2 + rng.uniform() * 2.0, 4, 5);
        std::uint64_t id = 1;
        for (int op = 0; op < 60; ++op) {
            if (rng.pick(4) == 0 && link.total_occupants() > 0) {
                // drop a random existing reservation
                for (const Bucket& b : link.buckets()) {
                    if (!b.occupants.empty()) {
                        const CommTask victim = b.occupants[rng.pick(
                            b.occupants.size())];
                        link.release(victim.task, victim.transfer_id);
                        break;
                    }
                }
            } else {
                const double earliest = link.reasoning_time() +
                                        rng.uniform() * 20.0 *
                                            link.transfer_unit();
                const auto slot = link.find_comm_slot(earliest);
                if (!slot)
                    continue;
                link.reserve(slot->bucket, CommTask{id, id, slot->transfer_start});
                ++id;
            }
            for (const Bucket& b : link.buckets())
                CHECK(static_cast<int>(b.occupants.size()) <= b.capacity);
        }
    }
}

TEST_CASE("bandwidth estimate update follows the smoothing recurrence") {
    const BandwidthEstimate est = make_bandwidth_estimate(10e6, 0.3);
    SUBCASE("known arithmetic") {
        const auto upd = update_bandwidth(est, {20e6}, 1.0);
        CHECK(upd.applied);
        CHECK(upd.estimate.value_bps == doctest::Approx(13e6));
        CHECK(upd.estimate.last_update_s == doctest::Approx(1.0));
    }
    SUBCASE("fixed point") {
        const auto upd = update_bandwidth(est, {10e6, 10e6}, 2.0);
        CHECK(upd.estimate.value_bps == doctest::Approx(10e6));
    }
    SUBCASE("alpha one forgets history") {
        const auto eager = make_bandwidth_estimate(10e6, 1.0);
        const auto upd = update_bandwidth(eager, {4e6, 6e6}, 3.0);
        CHECK(upd.estimate.value_bps == doctest::Approx(5e6));
    }
    SUBCASE("empty sample set is a flagged no-op") {
        const auto upd = update_bandwidth(est, {}, 4.0);
        CHECK_FALSE(upd.applied);
        CHECK(upd.estimate.value_bps == doctest::Approx(10e6));
    }
    SUBCASE("invalid parameters are rejected") {
        CHECK_THROWS_AS(make_bandwidth_estimate(0.0), std::invalid_argument);
        CHECK_THROWS_AS(make_bandwidth_estimate(1e6, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(make_bandwidth_estimate(1e6, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(update_bandwidth(est, {1e6, -2e6}, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("updated estimate stays between the old value and the sample mean") {
    Rng rng(23);
    BandwidthEstimate est = make_bandwidth_estimate(8e6, 0.3);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> samples;
        const std::size_t n = 1 + rng.pick(8);
        double sum = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            samples.push_back(1e5 + rng.uniform() * 2e7);
            sum += samples.back();
        }
        const double mean = sum / static_cast<double>(n);
        const double lo = std::min(est.value_bps, mean);
        const double hi = std::max(est.value_bps, mean);
        est = update_bandwidth(est, samples, i).estimate;
        CHECK(est.value_bps >= lo - 1e-6);
        CHECK(est.value_bps <= hi + 1e-6);
    }
}

TEST_CASE("cascade migrates, drops the past, and loses nothing") {
    SUBCASE("occupants before the new anchor are dropped as completed") {
        NetworkLink old_link(0.0, 1.0, 4, 4);
        old_link.reserve(1, CommTask{1, 1, 1.0});
        old_link.reserve(2, CommTask{2, 2, 2.0});
        NetworkLink fresh(5.0, 1.0, 4, 4);  // anchor at 5: both are history
        const auto result = cascade(old_link, fresh);
        CHECK(result.kept.empty());
        CHECK(result.dropped_past.size() == 2);
        CHECK(fresh.total_occupants() == 0);
    }
    SUBCASE("future occupants survive exactly once") {
        NetworkLink old_link(0.0, 1.0, 4, 6);
        old_link.reserve(2, CommTask{1, 1, 2.0});
        old_link.reserve(5, CommTask{2, 2, 9.0});
        NetworkLink fresh(1.0, 1.0, 4, 6);
        const auto result = cascade(old_link, fresh);
        CHECK(result.dropped_past.empty());
        CHECK(result.overflow.empty());
        REQUIRE(result.kept.size() == 2);
        CHECK(fresh.total_occupants() == 2);
    }
    SUBCASE("an empty source changes nothing") {
        NetworkLink old_link(0.0, 1.0, 4, 4);
        NetworkLink fresh(2.0, 0.5, 4, 4);
        const auto result = cascade(old_link, fresh);
        CHECK(result.kept.empty());
        CHECK(fresh.total_occupants() == 0);
    }
    SUBCASE("a shrunken link reports what no longer fits") {
        NetworkLink old_link(0.0, 1.0, 4, 6);
        std::uint64_t id = 1;
        while (true) {
            const auto slot = old_link.find_comm_slot(0.0);
            if (!slot)
                break;
            old_link.reserve(slot->bucket, CommTask{id, id, slot->transfer_start});
            ++id;
        }
        NetworkLink fresh(0.5, 1.0, 4, 1);  // far smaller horizon
        const auto result = cascade(old_link, fresh);
        CHECK(!result.overflow.empty());
        const std::size_t total = result.kept.size() + result.overflow.size() +
                                  result.dropped_past.size();
        CHECK(total == old_link.total_occupants());
    }
}

TEST_CASE("cascade conserves occupants over random evolutions") {
    Rng rng(29);
    for (int trial = 0; trial < 300; ++trial) {
        const double unit = 0.1 + rng.uniform() * 2.0;
        const double start = rng.uniform() * 100.0;
        NetworkLink link(start, unit, 4, 6);
        std::uint64_t id = 1;
        const int n = static_cast<int>(rng.pick(20));
        for (int i = 0; i < n; ++i) {
            const double earliest =
                link.reasoning_time() + rng.uniform() * 25.0 * unit;
            const auto slot = link.find_comm_slot(earliest);
            if (!slot)
                continue;
            link.reserve(slot->bucket, CommTask{id, id, slot->transfer_start});
            ++id;
        }
        const std::size_t before = link.total_occupants();

        const double new_unit = 0.1 + rng.uniform() * 2.0;
        const double new_now =
            link.reasoning_time() + rng.uniform() * 20.0 * unit;
        NetworkLink fresh(new_now, new_unit, 4, 6);
        const auto result = cascade(link, fresh);

        CHECK(result.kept.size() + result.dropped_past.size() +
                  result.overflow.size() ==
              before);
        CHECK(fresh.total_occupants() == result.kept.size());
        for (const CommTask& dropped : result.dropped_past)
            CHECK(fresh.query_index(dropped.transfer_start) < 0);
        std::map<std::uint64_t, int> seen;
        for (const Bucket& b : fresh.buckets())
            for (const CommTask& c : b.occupants)
                ++seen[c.transfer_id];
        for (const auto& [tid, count] : seen)
            CHECK(count == 1);
        for (const Bucket& b : fresh.buckets())
            CHECK(static_cast<int>(b.occupants.size()) <= b.capacity);
    }
}

TEST_CASE("link dump exposes the geometry for golden comparisons") {
    const NetworkLink link(0.0, 1.0, 4, 1);
    CHECK(link.dump() ==
          "link t_r 0 D 1 n_base 4 n_exp 1\n"
          "  bucket 0 [0, 1) cap 1 occ 0\n"
          "  bucket 1 [1, 2) cap 1 occ 0\n"
          "  bucket 2 [2, 3) cap 1 occ 0\n"
          "  bucket 3 [3, 4) cap 1 occ 0\n"
          "  bucket 4 [4, 8) cap 4 occ 0\n");
}
