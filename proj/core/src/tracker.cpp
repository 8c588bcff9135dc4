#include <featuresort/tracker.hpp>

#include <algorithm>
#include <map>

namespace featuresort {

Tracker::Tracker(TrackerConfig cfg) : cfg_(std::move(cfg)), params_(KalmanParams::standard()) {
    cfg_.validate();
}

void Tracker::step(int frame, const std::vector<Detection>& detections) {
    std::vector<Detection> dets;
    dets.reserve(detections.size());
    for (const auto& d : detections) {
        if (d.conf >= cfg_.conf_min) dets.push_back(d);
    }

    for (auto& track : tracks_) {
        track.kalman = predict(track.kalman, params_);
    }

    const Assignment assignment = match_frame(tracks_, dets, cfg_);

    if (audit_enabled_) {
        std::map<int, const Track*> by_id;
        for (const auto& t : tracks_) by_id[t.track_id] = &t;
        for (const auto& [track_id, det_index] : assignment.matches) {
            const Track& track = *by_id.at(track_id);
            const Detection& det = dets[det_index];
            MatchRecord rec;
            rec.frame = frame;
            rec.track_id = track_id;
            rec.det_index = det_index;
            rec.iou = iou(state_box(track.kalman), det.box);
            if (track.bank.direction_bin.has_value()) {
                rec.dir_distance =
                    direction_distance(track.bank, det.direction, cfg_.sigma_dir);
            }
            rec.cost = combined_cost(track, det, cfg_).first;
            audit_log_.push_back(rec);
        }
    }

    auto finished = lifecycle_step(tracks_, assignment, dets, frame, cfg_, params_,
                                   next_track_id_);
    finished_.insert(finished_.end(), std::make_move_iterator(finished.begin()),
                     std::make_move_iterator(finished.end()));
}

std::vector<Trajectory> Tracker::drain_finished() {
    std::vector<Trajectory> out = std::move(finished_);
    finished_.clear();
    return out;
}

std::vector<Trajectory> Tracker::flush() {
    std::vector<Trajectory> out;
    for (const auto& track : tracks_) {
        if (track.confirmed()) out.push_back(track_to_trajectory(track));
    }
    tracks_.clear();
    return out;
}

std::vector<Trajectory> run_tracker(const std::vector<Detection>& detections,
                                    const TrackerConfig& cfg,
                                    std::vector<MatchRecord>* audit) {
    Tracker tracker(cfg);
    tracker.set_audit(audit != nullptr);

    std::map<int, std::vector<Detection>> by_frame;
    for (const auto& d : detections) by_frame[d.frame].push_back(d);

    std::vector<Trajectory> out;
    if (!by_frame.empty()) {
        const int first = by_frame.begin()->first;
        const int last = by_frame.rbegin()->first;
        static const std::vector<Detection> kEmpty;
        for (int frame = first; frame <= last; ++frame) {
            const auto it = by_frame.find(frame);
            tracker.step(frame, it == by_frame.end() ? kEmpty : it->second);
        }
        out = tracker.drain_finished();
        auto flushed = tracker.flush();
        out.insert(out.end(), std::make_move_iterator(flushed.begin()),
                   std::make_move_iterator(flushed.end()));
    }

    std::sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) {
        if (a.first_frame() != b.first_frame()) return a.first_frame() < b.first_frame();
        return a.track_id < b.track_id;
    });
    if (audit) {
        const auto& log = tracker.audit_log();
        audit->insert(audit->end(), log.begin(), log.end());
    }
    return out;
}

}  // namespace featuresort
