#include <featuresort/kalman.hpp>

#include <algorithm>
#include <cmath>

#include <featuresort/log.hpp>

namespace featuresort {

namespace {

constexpr double kMinHeight = 1e-6;
constexpr double kMinAspect = 1e-6;

StateMatrix symmetrized(const StateMatrix& m) {
    return 0.5 * (m + m.transpose());
}

}  // namespace

KalmanParams KalmanParams::standard() {
    KalmanParams p;
    p.transition = StateMatrix::Identity();
    for (int i = 0; i < 4; ++i) {
        p.transition(i, i + 4) = 1.0;  // dt = 1 frame
        p.emission(i, i) = 1.0;
    }
    return p;
}

StateMatrix KalmanParams::process_noise(double box_height) const {
    const double h = std::max(box_height, kMinHeight);
    StateVector std;
    std << std_weight_pos * h, std_weight_pos * h, 1e-2, std_weight_pos * h,
        std_weight_vel * h, std_weight_vel * h, 1e-5, std_weight_vel * h;
    return std.array().square().matrix().asDiagonal();
}

MeasurementMatrix KalmanParams::measurement_noise(double box_height) const {
    const double h = std::max(box_height, kMinHeight);
    Measurement std;
    std << std_weight_pos * h, std_weight_pos * h, 1e-1, std_weight_pos * h;
    return std.array().square().matrix().asDiagonal();
}

Measurement box_to_measurement(const BBox& box) {
    return Measurement(box.cx(), box.cy(), box.w / box.h, box.h);
}

BBox measurement_to_box(const Measurement& z) {
    BBox box;
    box.h = std::max(z[3], kMinHeight);
    box.w = std::max(z[2], kMinAspect) * box.h;
    box.x = z[0] - 0.5 * box.w;
    box.y = z[1] - 0.5 * box.h;
    return box;
}

KalmanState initiate_state(const BBox& box, const KalmanParams& params) {
    KalmanState s;
    s.mean.head<4>() = box_to_measurement(box);
    const double h = std::max(box.h, kMinHeight);
    StateVector std;
    std << 2 * params.std_weight_pos * h, 2 * params.std_weight_pos * h, 1e-2,
        2 * params.std_weight_pos * h, 10 * params.std_weight_vel * h,
        10 * params.std_weight_vel * h, 1e-5, 10 * params.std_weight_vel * h;
    s.cov = std.array().square().matrix().asDiagonal();
    return s;
}

KalmanState predict(const KalmanState& state, const KalmanParams& params) {
    KalmanState out;
    const StateMatrix q = params.process_noise(state.mean[3]);
    out.mean = params.transition * state.mean;
    out.cov = symmetrized(params.transition * state.cov * params.transition.transpose() + q);
    return out;
}

MeasurementMatrix nsa_noise(const MeasurementMatrix& noise, double conf) {
    if (conf < 0.0 || conf > 1.0) {
        log_warn("confidence %.4f outside [0,1], clamping", conf);
        conf = std::clamp(conf, 0.0, 1.0);
    }
    return (1.0 - conf) * noise;
}

KalmanState update(const KalmanState& predicted, const Measurement& z, double conf,
                   const KalmanParams& params, bool* regularized) {
    if (regularized) *regularized = false;
    const MeasurementMatrix r = nsa_noise(params.measurement_noise(predicted.mean[3]), conf);
    const EmissionMatrix& h = params.emission;

    MeasurementMatrix innovation_cov = h * predicted.cov * h.transpose() + r;
    innovation_cov = 0.5 * (innovation_cov + innovation_cov.transpose());

    Eigen::LLT<MeasurementMatrix> llt(innovation_cov);
    if (llt.info() != Eigen::Success) {
        innovation_cov += 1e-9 * MeasurementMatrix::Identity();
        llt.compute(innovation_cov);
        if (regularized) *regularized = true;
        log_debug("innovation covariance regularized");
    }

    // K = P H^T S^-1, computed via the factorization of S.
    const Eigen::Matrix<double, 8, 4> gain = llt.solve(h * predicted.cov).transpose();

    KalmanState out;
    out.mean = predicted.mean + gain * (z - h * predicted.mean);
    out.cov = symmetrized((StateMatrix::Identity() - gain * h) * predicted.cov);
    out.mean[2] = std::max(out.mean[2], kMinAspect);
    out.mean[3] = std::max(out.mean[3], kMinHeight);
    return out;
}

double gating_distance(const KalmanState& predicted, const Measurement& z,
                       double frame_diagonal) {
    const double dx = predicted.mean[0] - z[0];
    const double dy = predicted.mean[1] - z[1];
    return std::hypot(dx, dy) / frame_diagonal;
}

BBox state_box(const KalmanState& state) {
    return measurement_to_box(state.mean.head<4>());
}

}  // namespace featuresort
