#include <featuresort/postprocess.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <featuresort/features.hpp>
#include <featuresort/hungarian.hpp>
#include <featuresort/log.hpp>

namespace featuresort {

namespace {

TrajectoryPoint lerp_point(const TrajectoryPoint& a, const TrajectoryPoint& b, int frame) {
    const double t = static_cast<double>(frame - a.frame) / (b.frame - a.frame);
    TrajectoryPoint p;
    p.frame = frame;
    p.box.x = a.box.x + t * (b.box.x - a.box.x);
    p.box.y = a.box.y + t * (b.box.y - a.box.y);
    p.box.w = a.box.w + t * (b.box.w - a.box.w);
    p.box.h = a.box.h + t * (b.box.h - a.box.h);
    p.conf = a.conf + t * (b.conf - a.conf);
    p.interpolated = true;
    return p;
}

}  // namespace

Trajectory linear_fill(const Trajectory& traj, int max_gap) {
    if (traj.points.size() < 2) return traj;
    Trajectory out = traj;
    out.points.clear();
    out.points.push_back(traj.points.front());
    for (std::size_t i = 1; i < traj.points.size(); ++i) {
        const auto& prev = traj.points[i - 1];
        const auto& next = traj.points[i];
        const int gap = next.frame - prev.frame - 1;
        if (gap >= 1 && gap <= max_gap) {
            for (int f = prev.frame + 1; f < next.frame; ++f) {
                out.points.push_back(lerp_point(prev, next, f));
            }
        }
        out.points.push_back(next);
    }
    return out;
}

namespace {

Eigen::MatrixXd rbf_gram(const std::vector<double>& a, const std::vector<double>& b,
                         double length_scale) {
    Eigen::MatrixXd k(a.size(), b.size());
    const double denom = 2.0 * length_scale * length_scale;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = a[i] - b[j];
            k(i, j) = std::exp(-d * d / denom);
        }
    }
    return k;
}

// Stacks the four box coordinates of a trajectory as columns of a T x 4 matrix.
Eigen::MatrixXd coordinates(const Trajectory& traj) {
    Eigen::MatrixXd y(traj.points.size(), 4);
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        const BBox& b = traj.points[i].box;
        y(static_cast<Eigen::Index>(i), 0) = b.x;
        y(static_cast<Eigen::Index>(i), 1) = b.y;
        y(static_cast<Eigen::Index>(i), 2) = b.w;
        y(static_cast<Eigen::Index>(i), 3) = b.h;
    }
    return y;
}

}  // namespace

Trajectory gsp_smooth(const Trajectory& traj, const GspConfig& cfg) {
    const std::size_t n = traj.points.size();
    if (n < 2) return traj;

    std::vector<double> frames(n);
    for (std::size_t i = 0; i < n; ++i) frames[i] = traj.points[i].frame;

    Eigen::MatrixXd y = coordinates(traj);
    const Eigen::RowVector4d means = y.colwise().mean();
    y.rowwise() -= means;

    const Eigen::MatrixXd gram = rbf_gram(frames, frames, cfg.length_scale);
    Eigen::MatrixXd regularized = gram;
    regularized.diagonal().array() += cfg.noise_var;

    const Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() != Eigen::Success) {
        log_warn("GSP solve failed for track %d, returning input unchanged", traj.track_id);
        return traj;
    }
    Eigen::MatrixXd smoothed = gram * llt.solve(y);
    smoothed.rowwise() += means;

    Trajectory out = traj;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = smoothed.row(static_cast<Eigen::Index>(i));
        out.points[i].box.x = row[0];
        out.points[i].box.y = row[1];
        out.points[i].box.w = std::max(row[2], 1.0);
        out.points[i].box.h = std::max(row[3], 1.0);
    }
    return out;
}

std::vector<BBox> gsp_predict(const Trajectory& traj, const std::vector<int>& query_frames,
                              const GspConfig& cfg) {
    const std::size_t n = traj.points.size();
    std::vector<BBox> out;
    if (n == 0 || query_frames.empty()) return out;

    std::vector<double> frames(n);
    for (std::size_t i = 0; i < n; ++i) frames[i] = traj.points[i].frame;
    std::vector<double> queries(query_frames.begin(), query_frames.end());

    Eigen::MatrixXd y = coordinates(traj);
    const Eigen::RowVector4d means = y.colwise().mean();
    y.rowwise() -= means;

    Eigen::MatrixXd regularized = rbf_gram(frames, frames, cfg.length_scale);
    regularized.diagonal().array() += cfg.noise_var;
    const Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() != Eigen::Success) {
        log_warn("GSP predict solve failed for track %d", traj.track_id);
        return out;
    }
    const Eigen::MatrixXd cross = rbf_gram(queries, frames, cfg.length_scale);
    Eigen::MatrixXd pred = cross * llt.solve(y);
    pred.rowwise() += means;

    out.reserve(queries.size());
    for (Eigen::Index i = 0; i < pred.rows(); ++i) {
        BBox b;
        b.x = pred(i, 0);
        b.y = pred(i, 1);
        b.w = std::max(pred(i, 2), 1.0);
        b.h = std::max(pred(i, 3), 1.0);
        out.push_back(b);
    }
    return out;
}

double link_cost(const Trajectory& a, const Trajectory& b) {
    if (a.embedding_bank.empty() || b.embedding_bank.empty()) return 2.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& u : a.embedding_bank) {
        for (const auto& v : b.embedding_bank) {
            best = std::min(best, cosine_distance(u, v));
        }
    }
    return best;
}

namespace {

bool link_admissible(const Trajectory& a, const Trajectory& b, const LinkConfig& cfg,
                     int* gap_out, double* dist_out) {
    const int gap = b.first_frame() - a.last_frame();
    if (gap <= 0 || gap > cfg.temporal_max) return false;
    if (a.class_id != b.class_id) return false;
    const BBox& tail = a.points.back().box;
    const BBox& head = b.points.front().box;
    const double dist = std::hypot(tail.cx() - head.cx(), tail.cy() - head.cy());
    if (dist > cfg.spatial_max) return false;
    if (gap_out) *gap_out = gap;
    if (dist_out) *dist_out = dist;
    return true;
}

// Appends `later` to `earlier`, filling the junction gap linearly and keeping
// the earlier id. The merged bank keeps up to bank_cap vectors.
Trajectory merge_pair(const Trajectory& earlier, const Trajectory& later, int bank_cap) {
    Trajectory out = earlier;
    const TrajectoryPoint& tail = earlier.points.back();
    const TrajectoryPoint& head = later.points.front();
    for (int f = tail.frame + 1; f < head.frame; ++f) {
        out.points.push_back(lerp_point(tail, head, f));
    }
    out.points.insert(out.points.end(), later.points.begin(), later.points.end());
    for (const auto& v : later.embedding_bank) {
        if (static_cast<int>(out.embedding_bank.size()) >= bank_cap) break;
        out.embedding_bank.push_back(v);
    }
    out.conf_mean = trajectory_conf_mean(out);
    return out;
}

}  // namespace

LinkResult global_link(std::vector<Trajectory> trajs, const LinkConfig& cfg) {
    LinkResult result;

    bool merged_any = true;
    while (merged_any) {
        merged_any = false;
        std::sort(trajs.begin(), trajs.end(), [](const Trajectory& a, const Trajectory& b) {
            if (a.first_frame() != b.first_frame()) return a.first_frame() < b.first_frame();
            return a.track_id < b.track_id;
        });

        const int n = static_cast<int>(trajs.size());
        if (n < 2) break;
        const double inadmissible = 1e9;
        Eigen::MatrixXd cost(n, n);
        cost.setConstant(inadmissible);
        bool any_candidate = false;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (link_admissible(trajs[i], trajs[j], cfg, nullptr, nullptr)) {
                    cost(i, j) = link_cost(trajs[i], trajs[j]);
                    any_candidate = true;
                }
            }
        }
        if (!any_candidate) break;

        const std::vector<int> successor = solve_assignment(cost);

        // Accepted merges this round; chains resolve by walking successors.
        std::vector<int> next(n, -1);
        for (int i = 0; i < n; ++i) {
            const int j = successor[i];
            if (j < 0 || cost(i, j) >= inadmissible) continue;
            if (1.0 - cost(i, j) < cfg.accept_sim) continue;
            int gap = 0;
            double dist = 0.0;
            link_admissible(trajs[i], trajs[j], cfg, &gap, &dist);
            next[i] = j;
            result.merges.push_back({trajs[i].track_id, trajs[j].track_id, gap, dist,
                                     cost(i, j)});
            merged_any = true;
        }
        if (!merged_any) break;

        std::vector<bool> is_successor(n, false);
        for (int i = 0; i < n; ++i) {
            if (next[i] >= 0) is_successor[next[i]] = true;
        }
        std::vector<Trajectory> merged;
        for (int i = 0; i < n; ++i) {
            if (is_successor[i]) continue;  // consumed by an earlier fragment
            Trajectory cur = trajs[i];
            for (int j = next[i]; j >= 0; j = next[j]) {
                cur = merge_pair(cur, trajs[j], cfg.bank_cap);
            }
            merged.push_back(std::move(cur));
        }
        trajs = std::move(merged);
    }

    result.trajectories = std::move(trajs);
    return result;
}

std::vector<Trajectory> postprocess(std::vector<Trajectory> trajs, const GspConfig& gsp,
                                    const LinkConfig& link,
                                    std::vector<MergeRecord>* merges) {
    LinkResult linked = global_link(std::move(trajs), link);
    if (merges) {
        merges->insert(merges->end(), linked.merges.begin(), linked.merges.end());
    }
    std::vector<Trajectory> out;
    out.reserve(linked.trajectories.size());
    for (auto& traj : linked.trajectories) {
        out.push_back(gsp_smooth(linear_fill(traj, gsp.max_gap), gsp));
    }
    std::sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) {
        if (a.first_frame() != b.first_frame()) return a.first_frame() < b.first_frame();
        return a.track_id < b.track_id;
    });
    return out;
}

}  // namespace featuresort
