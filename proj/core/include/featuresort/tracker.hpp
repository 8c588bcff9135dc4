#pragma once

#include <optional>
#include <vector>

#include <featuresort/association.hpp>
#include <featuresort/config.hpp>
#include <featuresort/track.hpp>

namespace featuresort {

/// One emitted match, recorded when auditing is enabled. IoU and direction
/// distance are recomputed from the pre-update predicted state so gate
/// soundness can be checked after the fact.
struct MatchRecord {
    int frame = 0;
    int track_id = 0;
    int det_index = 0;
    double iou = 0.0;
    std::optional<double> dir_distance;  // empty when the slot was empty
    double cost = 0.0;
};

/// Online tracker for one sequence: predict, match, lifecycle per frame.
/// Single-threaded through time; run one instance per sequence.
class Tracker {
public:
    explicit Tracker(TrackerConfig cfg);

    /// Processes one frame. Detections below conf_min are dropped here;
    /// everything else must already be normalized.
    void step(int frame, const std::vector<Detection>& detections);

    /// Trajectories finished so far (tracks deleted after aging out).
    /// Draining resets the internal list.
    std::vector<Trajectory> drain_finished();

    /// Ends the sequence: every live track that ever reached Confirmed is
    /// emitted. Combine with drain_finished() for the complete output.
    std::vector<Trajectory> flush();

    const std::vector<Track>& tracks() const { return tracks_; }
    const TrackerConfig& config() const { return cfg_; }

    void set_audit(bool enabled) { audit_enabled_ = enabled; }
    const std::vector<MatchRecord>& audit_log() const { return audit_log_; }

private:
    TrackerConfig cfg_;
    KalmanParams params_;
    std::vector<Track> tracks_;
    std::vector<Trajectory> finished_;
    std::vector<MatchRecord> audit_log_;
    int next_track_id_ = 1;
    bool audit_enabled_ = false;
};

/// Runs a whole sequence through a fresh tracker and returns its
/// trajectories sorted by first frame then id. Frames from the lowest to the
/// highest detection frame are stepped, including empty ones. The audit log
/// is appended to `audit` when given.
std::vector<Trajectory> run_tracker(const std::vector<Detection>& detections,
                                    const TrackerConfig& cfg,
                                    std::vector<MatchRecord>* audit = nullptr);

}  // namespace featuresort
