#ifndef EDGESCHED_NETWORK_LINK_HPP
#define EDGESCHED_NETWORK_LINK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgesched/task.hpp"
#include "edgesched/time_window.hpp"

namespace edgesched {

/// Time to push the largest task input through the link at the estimated
/// bandwidth; the quantum of the link discretisation.
double compute_transfer_unit(double max_image_bits, double bandwidth_bps);

/// One reserved transfer on the link.
struct CommTask {
    TaskId task = 0;
    std::uint64_t transfer_id = 0;
    double transfer_start = 0.0;

    friend bool operator==(const CommTask& a, const CommTask& b) {
        return a.task == b.task && a.transfer_id == b.transfer_id;
    }
};

/// Capacity-bounded time cell of the discretised link. The window spans
/// capacity * D seconds; reserved transfers pack one after another from the
/// window start.
struct Bucket {
    int index = 0;
    TimeWindow window{0.0, 1.0};
    int capacity = 1;
    std::vector<CommTask> occupants;
    double packed_until = 0.0;  // serialized tail of the reserved transfers
};

struct CommSlot {
    int bucket = 0;
    double transfer_start = 0.0;
};

/// Discretised time horizon of the shared wireless link, anchored at the
/// reasoning time t_r (construction time rounded up to a multiple of D).
/// The first n_base buckets are unit cells of one transfer each; after those,
/// bucket m covers base slots [2^(m-2), 2^(m-1)) with capacity 2^(m-2), so a
/// closed-form index lookup replaces a horizon scan. Only n_base = 4 makes
/// the unit range and the exponential mapping floor(log2(i)+2) seamless, so
/// other values are rejected.
class NetworkLink {
public:
    NetworkLink(double now, double transfer_unit, int n_base = 4, int n_exp = 16);

    double reasoning_time() const { return t_r_; }
    double transfer_unit() const { return unit_; }
    int base_bucket_count() const { return n_base_; }
    int exp_bucket_count() const { return n_exp_; }
    const std::vector<Bucket>& buckets() const { return buckets_; }
    double horizon_end() const { return buckets_.back().window.t2; }

    /// Closed-form bucket index for a time point. Negative means the point
    /// lies in the past of the discretisation (a transfer there is treated as
    /// already completed); an index >= buckets().size() is beyond the horizon.
    int query_index(double t_p) const;

    /// First bucket at or after `earliest` that can take one more transfer,
    /// with the serialized start position inside it. Empty when the link is
    /// saturated through the horizon.
    std::optional<CommSlot> find_comm_slot(double earliest) const;

    /// Same forward iteration, starting at an explicit bucket index.
    std::optional<CommSlot> find_comm_slot_from(int start_index, double earliest) const;

    /// Commit a transfer into a bucket. Throws std::runtime_error when the
    /// bucket cannot take it (caller must re-query).
    void reserve(int bucket_index, const CommTask& task);

    /// Drop a reservation (preempted task); true if it was present.
    bool release(TaskId task, std::uint64_t transfer_id);

    std::size_t total_occupants() const;

    std::string dump() const;

private:
    double t_r_;
    double unit_;
    int n_base_;
    int n_exp_;
    std::vector<Bucket> buckets_;

    // next slot boundary at or after t (exact multiples map to the next slot)
    long long base_slots_up(double t) const;
    double round_up(double t) const;
    std::optional<CommSlot> slot_in_bucket(const Bucket& b, double earliest) const;
};

/// Migrate reservations from an old discretisation into `fresh` after a
/// bandwidth re-estimate. Transfers whose index is negative in the new link
/// are dropped as completed; the rest re-enter through forward iteration.
/// Anything that no longer fits is returned for re-scheduling.
struct TransferMove {
    CommTask task;
    int bucket = 0;
    double new_start = 0.0;
};

struct CascadeResult {
    std::vector<TransferMove> kept;
    std::vector<CommTask> dropped_past;
    std::vector<CommTask> overflow;
};

CascadeResult cascade(const NetworkLink& old_link, NetworkLink& fresh);

/// Exponentially weighted moving average over probe samples.
struct BandwidthEstimate {
    double value_bps = 1.0;
    double alpha = 0.3;
    double last_update_s = 0.0;
};

BandwidthEstimate make_bandwidth_estimate(double value_bps, double alpha = 0.3);

struct BandwidthUpdate {
    BandwidthEstimate estimate;
    bool applied = false;  // false when the sample set was empty
};

BandwidthUpdate update_bandwidth(const BandwidthEstimate& est,
                                 const std::vector<double>& samples_bps,
                                 double now);

} // namespace edgesched

#endif
