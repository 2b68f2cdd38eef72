#include "edgesched/network_link.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace edgesched {

double compute_transfer_unit(double max_image_bits, double bandwidth_bps) {
    if (max_image_bits <= 0.0 || bandwidth_bps <= 0.0)
        throw std::invalid_argument("transfer unit needs positive size and bandwidth");
    return max_image_bits / bandwidth_bps;
}

NetworkLink::NetworkLink(double now, double transfer_unit, int n_base, int n_exp)
    : unit_(transfer_unit), n_base_(n_base), n_exp_(n_exp) {
    if (transfer_unit <= 0.0)
        throw std::invalid_argument("transfer unit must be positive");
    if (n_base != 4)
        throw std::invalid_argument(
            "the closed-form index requires exactly 4 unit buckets");
    if (n_exp < 1)
        throw std::invalid_argument("need at least one exponential bucket");
    t_r_ = std::ceil(now / unit_) * unit_;
    buckets_.reserve(static_cast<std::size_t>(n_base_ + n_exp_));
    for (int i = 0; i < n_base_; ++i) {
        Bucket b;
        b.index = i;
        b.window = TimeWindow{t_r_ + i * unit_, t_r_ + (i + 1) * unit_};
        b.capacity = 1;
        b.packed_until = b.window.t1;
        buckets_.push_back(std::move(b));
    }
    for (int m = n_base_; m < n_base_ + n_exp_; ++m) {
        const double lo = std::exp2(m - 2);
        const double hi = std::exp2(m - 1);
        Bucket b;
        b.index = m;
        b.window = TimeWindow{t_r_ + lo * unit_, t_r_ + hi * unit_};
        b.capacity = static_cast<int>(lo);
        b.packed_until = b.window.t1;
        buckets_.push_back(std::move(b));
    }
}

// Base slot index of a time point: delta plus the distance to the next slot
// boundary, in units of D. The value is an integer by construction (an exact
// multiple of D maps to the following slot), so it is snapped to the nearest
// integer to keep boundary classification stable.
long long NetworkLink::base_slots_up(double t) const {
    const double delta = t - t_r_;
    const double rem = std::fmod(delta, unit_);
    return std::llround((delta + (unit_ - rem)) / unit_);
}

double NetworkLink::round_up(double t) const {
    return t_r_ + static_cast<double>(base_slots_up(t)) * unit_;
}

int NetworkLink::query_index(double t_p) const {
    const long long base = base_slots_up(t_p);
    if (base < n_base_)
        return static_cast<int>(base);
    return static_cast<int>(
        std::floor(std::log2(static_cast<double>(base)) + 2.0));
}

std::optional<CommSlot> NetworkLink::slot_in_bucket(const Bucket& b,
                                                    double earliest) const {
    if (static_cast<int>(b.occupants.size()) >= b.capacity)
        return std::nullopt;
    const double lower = std::max(b.window.t1, round_up(earliest));
    const double start = std::max(b.packed_until, lower);
    if (start + unit_ > b.window.t2 + 1e-9 * unit_)
        return std::nullopt;
    return CommSlot{b.index, start};
}

std::optional<CommSlot> NetworkLink::find_comm_slot(double earliest) const {
    int idx = query_index(earliest);
    if (idx < 0)
        idx = 0;
    return find_comm_slot_from(idx, earliest);
}

std::optional<CommSlot> NetworkLink::find_comm_slot_from(int start_index,
                                                         double earliest) const {
    if (start_index < 0)
        start_index = 0;
    for (std::size_t i = static_cast<std::size_t>(start_index); i < buckets_.size();
         ++i) {
        if (auto slot = slot_in_bucket(buckets_[i], earliest))
            return slot;
    }
    return std::nullopt;
}

void NetworkLink::reserve(int bucket_index, const CommTask& task) {
    if (bucket_index < 0 || bucket_index >= static_cast<int>(buckets_.size()))
        throw std::runtime_error("bucket index out of range");
    Bucket& b = buckets_[static_cast<std::size_t>(bucket_index)];
    if (static_cast<int>(b.occupants.size()) >= b.capacity)
        throw std::runtime_error("bucket at full capacity");
    b.occupants.push_back(task);
    b.packed_until = std::max(b.packed_until, task.transfer_start + unit_);
}

bool NetworkLink::release(TaskId task, std::uint64_t transfer_id) {
    for (Bucket& b : buckets_) {
        auto it = std::find_if(b.occupants.begin(), b.occupants.end(),
                               [&](const CommTask& c) {
                                   return c.task == task && c.transfer_id == transfer_id;
                               });
        if (it == b.occupants.end())
            continue;
        b.occupants.erase(it);
        b.packed_until = b.window.t1;
        for (const CommTask& c : b.occupants)
            b.packed_until = std::max(b.packed_until, c.transfer_start + unit_);
        return true;
    }
    return false;
}

std::size_t NetworkLink::total_occupants() const {
    std::size_t n = 0;
    for (const Bucket& b : buckets_)
        n += b.occupants.size();
    return n;
}

std::string NetworkLink::dump() const {
    std::ostringstream os;
    os << "link t_r " << t_r_ << " D " << unit_ << " n_base " << n_base_
       << " n_exp " << n_exp_ << "\n";
    for (const Bucket& b : buckets_) {
        os << "  bucket " << b.index << " [" << b.window.t1 << ", " << b.window.t2
           << ") cap " << b.capacity << " occ " << b.occupants.size() << "\n";
    }
    return os.str();
}

CascadeResult cascade(const NetworkLink& old_link, NetworkLink& fresh) {
    CascadeResult result;
    for (const Bucket& b : old_link.buckets()) {
        for (const CommTask& occ : b.occupants) {
            const int idx = fresh.query_index(occ.transfer_start);
            if (idx < 0) {
                result.dropped_past.push_back(occ);
                continue;
            }
            std::optional<CommSlot> slot =
                fresh.find_comm_slot_from(idx, occ.transfer_start);
            if (!slot) {
                result.overflow.push_back(occ);
                continue;
            }
            CommTask moved = occ;
            moved.transfer_start = slot->transfer_start;
            fresh.reserve(slot->bucket, moved);
            result.kept.push_back(TransferMove{moved, slot->bucket,
                                               slot->transfer_start});
        }
    }
    return result;
}

BandwidthEstimate make_bandwidth_estimate(double value_bps, double alpha) {
    if (value_bps <= 0.0)
        throw std::invalid_argument("bandwidth estimate must be positive");
    if (alpha <= 0.0 || alpha > 1.0)
        throw std::invalid_argument("alpha must be in (0, 1]");
    return BandwidthEstimate{value_bps, alpha, 0.0};
}

BandwidthUpdate update_bandwidth(const BandwidthEstimate& est,
                                 const std::vector<double>& samples_bps,
                                 double now) {
    if (samples_bps.empty())
        return BandwidthUpdate{est, false};
    for (double s : samples_bps)
        if (s <= 0.0)
            throw std::invalid_argument("bandwidth samples must be positive");
    const double mean =
        std::accumulate(samples_bps.begin(), samples_bps.end(), 0.0) /
        static_cast<double>(samples_bps.size());
    BandwidthEstimate next = est;
    next.value_bps = est.alpha * mean + (1.0 - est.alpha) * est.value_bps;
    next.last_update_s = now;
    return BandwidthUpdate{next, true};
}

} // namespace edgesched
