#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include <featuresort/config.hpp>
#include <featuresort/track.hpp>
#include <featuresort/types.hpp>

namespace featuresort {

/// Rectangular matrix of combined distances with the admissibility mask.
/// Inadmissible cells carry exactly d_max + epsilon.
struct CostMatrix {
    Eigen::MatrixXd values;  // tracks x detections
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> gate;
    std::vector<int> track_ids;    // row -> track id
    std::vector<int> det_indices;  // col -> index into the frame's detections

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
};

/// Outcome of one frame's matching. Every track and every detection appears
/// exactly once across the three lists.
struct Assignment {
    std::vector<std::pair<int, int>> matches;  // (track_id, det_index)
    std::vector<int> unmatched_tracks;         // track ids
    std::vector<int> unmatched_dets;           // detection indices
};

/// Combined distance of one (track, detection) pair plus its admissibility.
/// Admissible requires IoU(predicted box, det box) > iou_min and, when the
/// track has a direction on record, direction distance < dir_max. The value
/// is the lambda-weighted sum of motion, edge, color and style distances;
/// terms whose stack is empty are dropped and the remaining lambdas are
/// rescaled to preserve the total weight. Inadmissible pairs get
/// d_max + epsilon.
///
/// Classes are matched separately; a class mismatch is a caller bug and
/// throws std::logic_error.
std::pair<double, bool> combined_cost(const Track& track, const Detection& det,
                                      const TrackerConfig& cfg);

/// Pairwise combined_cost over same-class tracks and detections.
/// `det_indices` names each column's index in the frame's detection list.
CostMatrix build_cost_matrix(const std::vector<Track>& tracks,
                             const std::vector<Detection>& dets,
                             const std::vector<int>& det_indices,
                             const TrackerConfig& cfg);

/// Minimum-total-cost assignment over the matrix; matched pairs whose value
/// is >= reject_threshold are demoted to unmatched. Gated-out cells carry
/// d_max + epsilon >= d_max, so any assignment touching one is demoted.
Assignment hungarian_solve(const CostMatrix& m, double reject_threshold);

/// Full per-frame matching: detections and tracks are partitioned by class,
/// each class is solved independently and the assignments are merged.
/// Detections are expected to be pre-filtered by conf >= conf_min.
Assignment match_frame(const std::vector<Track>& tracks,
                       const std::vector<Detection>& dets,
                       const TrackerConfig& cfg);

/// Applies one frame's assignment to the track set: matched tracks get a
/// confidence-weighted Kalman update and a feature append; unmatched tracks
/// age and are deleted past age_max (tentative ones immediately); unmatched
/// detections start new tentative tracks. Deleted confirmed tracks are
/// returned as finished trajectories. `next_track_id` supplies fresh ids and
/// is advanced.
std::vector<Trajectory> lifecycle_step(std::vector<Track>& tracks,
                                       const Assignment& assignment,
                                       const std::vector<Detection>& dets,
                                       int frame, const TrackerConfig& cfg,
                                       const KalmanParams& params,
                                       int& next_track_id);

}  // namespace featuresort
