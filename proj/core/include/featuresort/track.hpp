#pragma once

#include <vector>

#include <featuresort/features.hpp>
#include <featuresort/kalman.hpp>
#include <featuresort/types.hpp>

namespace featuresort {

enum class TrackStatus { Tentative, Confirmed, Deleted };

/// Live tracklet: motion state, appearance bank, lifecycle counters and the
/// recorded per-frame boxes.
struct Track {
    int track_id = 0;
    int class_id = 0;
    KalmanState kalman;
    FeatureBank bank;
    int age_since_update = 0;
    int hits = 1;
    TrackStatus status = TrackStatus::Tentative;
    std::vector<TrajectoryPoint> history;

    bool confirmed() const { return status == TrackStatus::Confirmed; }
};

/// New tentative track seeded from a detection: zero velocity, covariance
/// scaled by box height, bank initialized from the detection's features.
Track make_track(int track_id, const Detection& det, const KalmanParams& params,
                 const TrackerConfig& cfg);

/// Finished-trajectory view of a track (history + retained embedding bank).
Trajectory track_to_trajectory(const Track& track);

}  // namespace featuresort
