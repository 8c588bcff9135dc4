#include <featuresort/association.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <featuresort/hungarian.hpp>

namespace featuresort {

std::pair<double, bool> combined_cost(const Track& track, const Detection& det,
                                      const TrackerConfig& cfg) {
    if (track.class_id != det.class_id) {
        throw std::logic_error("combined_cost called across classes; classes are matched separately");
    }

    const BBox predicted = state_box(track.kalman);
    const double gated_value = cfg.d_max + cfg.epsilon;

    if (iou(predicted, det.box) <= cfg.iou_min) {
        return {gated_value, false};
    }
    if (track.bank.direction_bin.has_value()) {
        const double d_dir = direction_distance(track.bank, det.direction, cfg.sigma_dir);
        if (d_dir >= cfg.dir_max) {
            return {gated_value, false};
        }
    }

    const double d_motion =
        gating_distance(track.kalman, box_to_measurement(det.box), cfg.frame_diagonal());

    // Terms whose stack is empty drop out; the remaining lambdas are rescaled
    // so the total weight mass stays constant across track ages.
    double value = cfg.lambda_motion * d_motion;
    double active_mass = cfg.lambda_motion;
    const double total_mass =
        cfg.lambda_motion + cfg.lambda_edge + cfg.lambda_color + cfg.lambda_style;

    if (track.bank.ema_initialized()) {
        value += cfg.lambda_edge * edge_distance(track.bank, det.embedding);
        active_mass += cfg.lambda_edge;
    }
    if (!track.bank.colors.empty()) {
        value += cfg.lambda_color * color_distance(track.bank, det.color);
        active_mass += cfg.lambda_color;
    }
    if (!track.bank.styles.empty()) {
        value += cfg.lambda_style * style_distance(track.bank, det.style);
        active_mass += cfg.lambda_style;
    }
    if (active_mass > 0.0) {
        value *= total_mass / active_mass;
    }
    return {value, true};
}

namespace {

// Detection-side tables that turn each cross-entropy evaluation into a dot
// product: ce(a, b) = -sum(log(1-b)) - a . (log(b) - log(1-b)).
struct DetTables {
    double color_log1m_sum = 0.0;
    Eigen::VectorXd color_logit;
    double style_log1m_sum = 0.0;
    Eigen::VectorXd style_logit;
};

DetTables make_det_tables(const Detection& det) {
    DetTables t;
    auto fill = [](const Eigen::VectorXd& b, double& log1m_sum, Eigen::VectorXd& logit) {
        logit.resize(b.size());
        log1m_sum = 0.0;
        for (Eigen::Index k = 0; k < b.size(); ++k) {
            const double bk = std::clamp(b[k], kEpsProb, 1.0 - kEpsProb);
            const double lb = std::log(bk);
            const double l1m = std::log(1.0 - bk);
            log1m_sum += l1m;
            logit[k] = lb - l1m;
        }
    };
    fill(det.color, t.color_log1m_sum, t.color_logit);
    fill(det.style, t.style_log1m_sum, t.style_logit);
    return t;
}

double min_ce_with_tables(const std::deque<Eigen::VectorXd>& stack, double log1m_sum,
                          const Eigen::VectorXd& logit) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : stack) {
        best = std::min(best, -log1m_sum - a.dot(logit));
    }
    return best;
}

}  // namespace

CostMatrix build_cost_matrix(const std::vector<Track>& tracks,
                             const std::vector<Detection>& dets,
                             const std::vector<int>& det_indices,
                             const TrackerConfig& cfg) {
    CostMatrix m;
    const int rows = static_cast<int>(tracks.size());
    const int cols = static_cast<int>(dets.size());
    m.values.resize(rows, cols);
    m.gate.resize(rows, cols);
    m.track_ids.reserve(tracks.size());
    for (const auto& t : tracks) m.track_ids.push_back(t.track_id);
    m.det_indices = det_indices;
    if (rows == 0 || cols == 0) return m;

    std::vector<DetTables> tables;
    tables.reserve(dets.size());
    for (const auto& d : dets) tables.push_back(make_det_tables(d));

    const double gated_value = cfg.d_max + cfg.epsilon;
    const double total_mass =
        cfg.lambda_motion + cfg.lambda_edge + cfg.lambda_color + cfg.lambda_style;
    const double diag = cfg.frame_diagonal();

    for (int i = 0; i < rows; ++i) {
        const Track& track = tracks[i];
        const BBox predicted = state_box(track.kalman);
        Eigen::VectorXd dir_template;
        if (track.bank.direction_bin.has_value()) {
            dir_template =
                circular_gaussian_template(*track.bank.direction_bin, cfg.sigma_dir);
        }
        for (int j = 0; j < cols; ++j) {
            const Detection& det = dets[j];
            if (iou(predicted, det.box) <= cfg.iou_min) {
                m.values(i, j) = gated_value;
                m.gate(i, j) = false;
                continue;
            }
            if (dir_template.size() > 0 &&
                (det.direction - dir_template).squaredNorm() >= cfg.dir_max) {
                m.values(i, j) = gated_value;
                m.gate(i, j) = false;
                continue;
            }

            double value = cfg.lambda_motion *
                           gating_distance(track.kalman, box_to_measurement(det.box), diag);
            double active_mass = cfg.lambda_motion;
            if (track.bank.ema_initialized()) {
                value += cfg.lambda_edge * cosine_distance(track.bank.ema, det.embedding);
                active_mass += cfg.lambda_edge;
            }
            if (!track.bank.colors.empty()) {
                value += cfg.lambda_color * min_ce_with_tables(track.bank.colors,
                                                               tables[j].color_log1m_sum,
                                                               tables[j].color_logit);
                active_mass += cfg.lambda_color;
            }
            if (!track.bank.styles.empty()) {
                value += cfg.lambda_style * min_ce_with_tables(track.bank.styles,
                                                               tables[j].style_log1m_sum,
                                                               tables[j].style_logit);
                active_mass += cfg.lambda_style;
            }
            if (active_mass > 0.0) value *= total_mass / active_mass;
            m.values(i, j) = value;
            m.gate(i, j) = true;
        }
    }
    return m;
}

Assignment hungarian_solve(const CostMatrix& m, double reject_threshold) {
    Assignment out;
    const std::vector<int> row_to_col = solve_assignment(m.values);

    std::vector<bool> det_matched(m.cols(), false);
    for (int i = 0; i < m.rows(); ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && m.values(i, j) < reject_threshold) {
            out.matches.emplace_back(m.track_ids[i], m.det_indices[j]);
            det_matched[j] = true;
        } else {
            out.unmatched_tracks.push_back(m.track_ids[i]);
        }
    }
    for (int j = 0; j < m.cols(); ++j) {
        if (!det_matched[j]) out.unmatched_dets.push_back(m.det_indices[j]);
    }
    return out;
}

Assignment match_frame(const std::vector<Track>& tracks,
                       const std::vector<Detection>& dets,
                       const TrackerConfig& cfg) {
    std::map<int, std::vector<Track>> tracks_by_class;
    for (const auto& t : tracks) tracks_by_class[t.class_id].push_back(t);

    std::map<int, std::pair<std::vector<Detection>, std::vector<int>>> dets_by_class;
    for (int j = 0; j < static_cast<int>(dets.size()); ++j) {
        auto& entry = dets_by_class[dets[j].class_id];
        entry.first.push_back(dets[j]);
        entry.second.push_back(j);
    }

    Assignment merged;
    for (const auto& [class_id, class_tracks] : tracks_by_class) {
        const auto dit = dets_by_class.find(class_id);
        if (dit == dets_by_class.end()) {
            for (const auto& t : class_tracks) merged.unmatched_tracks.push_back(t.track_id);
            continue;
        }
        const CostMatrix m =
            build_cost_matrix(class_tracks, dit->second.first, dit->second.second, cfg);
        const Assignment a = hungarian_solve(m, cfg.d_max);
        merged.matches.insert(merged.matches.end(), a.matches.begin(), a.matches.end());
        merged.unmatched_tracks.insert(merged.unmatched_tracks.end(),
                                       a.unmatched_tracks.begin(), a.unmatched_tracks.end());
        merged.unmatched_dets.insert(merged.unmatched_dets.end(), a.unmatched_dets.begin(),
                                     a.unmatched_dets.end());
    }
    for (const auto& [class_id, class_dets] : dets_by_class) {
        if (!tracks_by_class.contains(class_id)) {
            merged.unmatched_dets.insert(merged.unmatched_dets.end(),
                                         class_dets.second.begin(), class_dets.second.end());
        }
    }
    std::sort(merged.unmatched_dets.begin(), merged.unmatched_dets.end());
    return merged;
}

std::vector<Trajectory> lifecycle_step(std::vector<Track>& tracks,
                                       const Assignment& assignment,
                                       const std::vector<Detection>& dets,
                                       int frame, const TrackerConfig& cfg,
                                       const KalmanParams& params,
                                       int& next_track_id) {
    std::map<int, int> det_of_track;
    for (const auto& [track_id, det_index] : assignment.matches) {
        det_of_track[track_id] = det_index;
    }

    std::vector<Trajectory> finished;
    std::vector<Track> survivors;
    survivors.reserve(tracks.size());

    for (auto& track : tracks) {
        const auto it = det_of_track.find(track.track_id);
        if (it != det_of_track.end()) {
            const Detection& det = dets[it->second];
            track.kalman = update(track.kalman, box_to_measurement(det.box), det.conf, params);
            stack_append(track.bank, det, cfg);
            track.age_since_update = 0;
            ++track.hits;
            if (track.status == TrackStatus::Tentative && track.hits >= cfg.n_init) {
                track.status = TrackStatus::Confirmed;
            }
            track.history.push_back({frame, state_box(track.kalman), det.conf, false});
            survivors.push_back(std::move(track));
            continue;
        }

        ++track.age_since_update;
        const bool expired = track.age_since_update > cfg.age_max;
        if (track.status == TrackStatus::Tentative) {
            track.status = TrackStatus::Deleted;  // missed before confirmation
        } else if (expired) {
            const bool was_confirmed = track.status == TrackStatus::Confirmed;
            track.status = TrackStatus::Deleted;
            if (was_confirmed) finished.push_back(track_to_trajectory(track));
        } else {
            survivors.push_back(std::move(track));
        }
    }

    for (const int det_index : assignment.unmatched_dets) {
        survivors.push_back(make_track(next_track_id++, dets[det_index], params, cfg));
    }

    tracks = std::move(survivors);
    return finished;
}

}  // namespace featuresort
