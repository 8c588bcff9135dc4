#pragma once

#include <vector>

#include <featuresort/config.hpp>
#include <featuresort/types.hpp>

namespace featuresort {

/// Fills every internal gap of at most max_gap frames by per-coordinate
/// linear interpolation; longer gaps stay. Filled points are flagged
/// interpolated and get linearly interpolated confidences.
Trajectory linear_fill(const Trajectory& traj, int max_gap);

/// Gaussian-process smoothing over frame index with an RBF kernel, applied
/// independently per coordinate of (x, y, w, h) after mean-centering:
/// solve (K + noise*I) beta = pos and emit K beta + mean at the same frames.
/// Width and height are floored at 1 px. Trajectories shorter than 2 points
/// are returned unchanged, as is the input if the solve fails.
Trajectory gsp_smooth(const Trajectory& traj, const GspConfig& cfg);

/// GP posterior mean at arbitrary query frames (the prediction form of the
/// smoother). Returns one box per query frame.
std::vector<BBox> gsp_predict(const Trajectory& traj, const std::vector<int>& query_frames,
                              const GspConfig& cfg);

/// Smallest cosine distance between the two embedding banks. Empty banks are
/// unlinkable (distance 2).
double link_cost(const Trajectory& a, const Trajectory& b);

/// One accepted merge, for post-hoc gate auditing.
struct MergeRecord {
    int earlier_id = 0;
    int later_id = 0;
    int gap = 0;             // frames between the fragments
    double center_dist = 0.0; // px between the facing endpoints
    double cost = 0.0;       // link_cost at merge time
};

struct LinkResult {
    std::vector<Trajectory> trajectories;
    std::vector<MergeRecord> merges;
};

/// Offline tracklet linking. Candidate pairs must satisfy
/// 0 < later.first_frame - earlier.last_frame <= temporal_max and an endpoint
/// center distance <= spatial_max; same class only. A Hungarian pass over
/// admissible pairs picks the cheapest links, links with cosine similarity
/// >= accept_sim are merged (gap filled, id of the earlier fragment kept) and
/// the process repeats until nothing merges.
LinkResult global_link(std::vector<Trajectory> trajs, const LinkConfig& cfg);

/// Full offline pass: global_link, then per-trajectory linear_fill and
/// gsp_smooth. Output sorted by (first frame, id).
std::vector<Trajectory> postprocess(std::vector<Trajectory> trajs, const GspConfig& gsp,
                                    const LinkConfig& link,
                                    std::vector<MergeRecord>* merges = nullptr);

}  // namespace featuresort
