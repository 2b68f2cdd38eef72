#ifndef EDGESCHED_TIME_WINDOW_HPP
#define EDGESCHED_TIME_WINDOW_HPP

#include <stdexcept>

namespace edgesched {

/// Half-open time interval [t1, t2) in seconds. Abutting windows do not
/// overlap, so back-to-back reservations never conflict.
struct TimeWindow {
    double t1;
    double t2;

    TimeWindow(double start, double end) : t1(start), t2(end) {
        if (!(t1 < t2))
            throw std::invalid_argument("TimeWindow requires t1 < t2");
    }

    double duration() const { return t2 - t1; }

    friend bool operator==(const TimeWindow& a, const TimeWindow& b) {
        return a.t1 == b.t1 && a.t2 == b.t2;
    }
};

/// True iff `inner` lies entirely inside `outer`.
inline bool window_contains(const TimeWindow& outer, const TimeWindow& inner) {
    return outer.t1 <= inner.t1 && inner.t2 <= outer.t2;
}

/// Half-open overlap test: touching windows ([0,10) and [10,20)) do not overlap.
inline bool windows_overlap(const TimeWindow& a, const TimeWindow& b) {
    return a.t1 < b.t2 && b.t1 < a.t2;
}

} // namespace edgesched

#endif
