#pragma once

#include <string>
#include <vector>

#include <featuresort/types.hpp>

namespace featuresort {

/// Per-frame tallies from the ground-truth correspondence.
struct FrameStats {
    int frame = 0;
    int matches = 0;
    int fp = 0;
    int fn = 0;
    int id_switches = 0;
};

/// CLEAR + identity metrics for one sequence.
struct EvalReport {
    double mota = 0.0;
    double idf1 = 0.0;
    long long id_switches = 0;
    long long fp = 0;
    long long fn = 0;
    long long gt_count = 0;
    long long idtp = 0;
    long long idfp = 0;
    long long idfn = 0;
    std::vector<FrameStats> per_frame;
};

/// Evaluates predictions against ground truth (both as trajectory sets).
/// Correspondence per frame follows the CLEAR convention: matches carried
/// over from the previous frame are kept while their IoU stays above the
/// threshold, the rest is solved by Hungarian on IoU. A matched ground truth
/// whose assigned prediction id changes from its last known one counts as an
/// identity switch. IDF1 comes from a global bipartite matching between
/// ground-truth and predicted identities maximizing IDTP.
///
/// When the two files cover different frame ranges the evaluation warns and
/// restricts itself to the intersection (unless one side is empty).
EvalReport evaluate(const std::vector<Trajectory>& predictions,
                    const std::vector<Trajectory>& ground_truth,
                    double iou_thresh = 0.5);

/// Human-readable report.
std::string format_report(const EvalReport& report);

/// Machine-readable key=value lines.
std::string report_key_values(const EvalReport& report);

}  // namespace featuresort
