#include <featuresort/track.hpp>

namespace featuresort {

Track make_track(int track_id, const Detection& det, const KalmanParams& params,
                 const TrackerConfig& cfg) {
    Track t;
    t.track_id = track_id;
    t.class_id = det.class_id;
    t.kalman = initiate_state(det.box, params);
    stack_append(t.bank, det, cfg);
    t.history.push_back({det.frame, det.box, det.conf, false});
    return t;
}

Trajectory track_to_trajectory(const Track& track) {
    Trajectory traj;
    traj.track_id = track.track_id;
    traj.class_id = track.class_id;
    traj.points = track.history;
    traj.embedding_bank.assign(track.bank.ema_snapshots.begin(),
                               track.bank.ema_snapshots.end());
    traj.conf_mean = trajectory_conf_mean(traj);
    return traj;
}

}  // namespace featuresort
