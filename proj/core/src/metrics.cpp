#include <featuresort/metrics.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <featuresort/hungarian.hpp>
#include <featuresort/log.hpp>

namespace featuresort {

namespace {

// frame -> (id -> box)
using FrameIndex = std::map<int, std::map<int, BBox>>;

FrameIndex index_by_frame(const std::vector<Trajectory>& trajs) {
    FrameIndex idx;
    for (const auto& traj : trajs) {
        for (const auto& p : traj.points) {
            idx[p.frame][traj.track_id] = p.box;
        }
    }
    return idx;
}

}  // namespace

EvalReport evaluate(const std::vector<Trajectory>& predictions,
                    const std::vector<Trajectory>& ground_truth,
                    double iou_thresh) {
    EvalReport report;
    const FrameIndex pred_idx = index_by_frame(predictions);
    const FrameIndex gt_idx = index_by_frame(ground_truth);

    int first = 0;
    int last = -1;
    if (!gt_idx.empty() && !pred_idx.empty()) {
        first = std::min(gt_idx.begin()->first, pred_idx.begin()->first);
        last = std::max(gt_idx.rbegin()->first, pred_idx.rbegin()->first);
        if (gt_idx.begin()->first != pred_idx.begin()->first ||
            gt_idx.rbegin()->first != pred_idx.rbegin()->first) {
            first = std::max(gt_idx.begin()->first, pred_idx.begin()->first);
            last = std::min(gt_idx.rbegin()->first, pred_idx.rbegin()->first);
            log_warn("frame ranges differ (gt %d..%d, pred %d..%d); evaluating %d..%d",
                     gt_idx.begin()->first, gt_idx.rbegin()->first, pred_idx.begin()->first,
                     pred_idx.rbegin()->first, first, last);
        }
    } else if (!gt_idx.empty()) {
        first = gt_idx.begin()->first;
        last = gt_idx.rbegin()->first;
    } else if (!pred_idx.empty()) {
        first = pred_idx.begin()->first;
        last = pred_idx.rbegin()->first;
    }

    std::map<int, int> last_match;   // gt id -> last matched pred id
    std::map<int, int> prev_pairs;   // gt id -> pred id matched in previous frame

    // Identity bookkeeping for IDF1.
    std::map<int, long long> gt_frames, pred_frames;
    std::map<std::pair<int, int>, long long> overlap_frames;

    static const std::map<int, BBox> kEmpty;
    for (int frame = first; frame <= last; ++frame) {
        const auto git = gt_idx.find(frame);
        const auto pit = pred_idx.find(frame);
        const auto& gts = git == gt_idx.end() ? kEmpty : git->second;
        const auto& preds = pit == pred_idx.end() ? kEmpty : pit->second;

        for (const auto& [gid, box] : gts) ++gt_frames[gid];
        for (const auto& [pid, box] : preds) ++pred_frames[pid];
        for (const auto& [gid, gbox] : gts) {
            for (const auto& [pid, pbox] : preds) {
                if (iou(gbox, pbox) >= iou_thresh) ++overlap_frames[{gid, pid}];
            }
        }

        FrameStats stats;
        stats.frame = frame;

        std::map<int, int> pairs;  // gt id -> pred id this frame
        std::set<int> used_preds;

        // Keep correspondences from the previous frame while they still hold.
        for (const auto& [gid, pid] : prev_pairs) {
            const auto g = gts.find(gid);
            const auto p = preds.find(pid);
            if (g != gts.end() && p != preds.end() && iou(g->second, p->second) >= iou_thresh) {
                pairs[gid] = pid;
                used_preds.insert(pid);
            }
        }

        // Hungarian on IoU for the remainder.
        std::vector<int> free_gts, free_preds;
        for (const auto& [gid, box] : gts) {
            if (!pairs.contains(gid)) free_gts.push_back(gid);
        }
        for (const auto& [pid, box] : preds) {
            if (!used_preds.contains(pid)) free_preds.push_back(pid);
        }
        if (!free_gts.empty() && !free_preds.empty()) {
            const double inadmissible = 1e9;
            Eigen::MatrixXd cost(free_gts.size(), free_preds.size());
            for (std::size_t i = 0; i < free_gts.size(); ++i) {
                for (std::size_t j = 0; j < free_preds.size(); ++j) {
                    const double overlap =
                        iou(gts.at(free_gts[i]), preds.at(free_preds[j]));
                    cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        overlap >= iou_thresh ? 1.0 - overlap : inadmissible;
                }
            }
            const std::vector<int> row_to_col = solve_assignment(cost);
            for (std::size_t i = 0; i < free_gts.size(); ++i) {
                const int j = row_to_col[i];
                if (j >= 0 && cost(static_cast<Eigen::Index>(i), j) < inadmissible) {
                    pairs[free_gts[i]] = free_preds[j];
                }
            }
        }

        for (const auto& [gid, pid] : pairs) {
            ++stats.matches;
            const auto lm = last_match.find(gid);
            if (lm != last_match.end() && lm->second != pid) {
                ++stats.id_switches;
            }
            last_match[gid] = pid;
        }
        stats.fn = static_cast<int>(gts.size()) - stats.matches;
        stats.fp = static_cast<int>(preds.size()) - stats.matches;

        report.fp += stats.fp;
        report.fn += stats.fn;
        report.id_switches += stats.id_switches;
        report.gt_count += static_cast<long long>(gts.size());
        report.per_frame.push_back(stats);
        prev_pairs = std::move(pairs);
    }

    if (report.gt_count > 0) {
        report.mota = 1.0 - static_cast<double>(report.fp + report.fn + report.id_switches) /
                                static_cast<double>(report.gt_count);
    } else {
        report.mota = report.fp == 0 ? 1.0 : 0.0;
    }

    // IDF1: global bipartite matching between identities maximizing IDTP.
    long long gt_total = 0, pred_total = 0;
    for (const auto& [gid, n] : gt_frames) gt_total += n;
    for (const auto& [pid, n] : pred_frames) pred_total += n;
    if (!gt_frames.empty() && !pred_frames.empty()) {
        std::vector<int> gids, pids;
        for (const auto& [gid, n] : gt_frames) gids.push_back(gid);
        for (const auto& [pid, n] : pred_frames) pids.push_back(pid);
        Eigen::MatrixXd cost(gids.size(), pids.size());
        for (std::size_t i = 0; i < gids.size(); ++i) {
            for (std::size_t j = 0; j < pids.size(); ++j) {
                const auto it = overlap_frames.find({gids[i], pids[j]});
                const double w = it == overlap_frames.end() ? 0.0
                                                            : static_cast<double>(it->second);
                cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = -w;
            }
        }
        const std::vector<int> row_to_col = solve_assignment(cost);
        for (std::size_t i = 0; i < gids.size(); ++i) {
            const int j = row_to_col[i];
            if (j >= 0) report.idtp += static_cast<long long>(-cost(static_cast<Eigen::Index>(i), j));
        }
    }
    report.idfn = gt_total - report.idtp;
    report.idfp = pred_total - report.idtp;
    const long long denom = 2 * report.idtp + report.idfp + report.idfn;
    report.idf1 = denom > 0 ? 2.0 * static_cast<double>(report.idtp) / static_cast<double>(denom)
                            : 1.0;
    return report;
}

std::string format_report(const EvalReport& report) {
    std::ostringstream os;
    os << "MOTA        " << report.mota << "\n"
       << "IDF1        " << report.idf1 << "\n"
       << "IDs         " << report.id_switches << "\n"
       << "FP          " << report.fp << "\n"
       << "FN          " << report.fn << "\n"
       << "GT          " << report.gt_count << "\n";
    return os.str();
}

std::string report_key_values(const EvalReport& report) {
    std::ostringstream os;
    os << "mota=" << report.mota << "\n"
       << "idf1=" << report.idf1 << "\n"
       << "id_switches=" << report.id_switches << "\n"
       << "fp=" << report.fp << "\n"
       << "fn=" << report.fn << "\n"
       << "gt_count=" << report.gt_count << "\n"
       << "idtp=" << report.idtp << "\n"
       << "idfp=" << report.idfp << "\n"
       << "idfn=" << report.idfn << "\n";
    return os.str();
}

}  // namespace featuresort
