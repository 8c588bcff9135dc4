#pragma once

#include <Eigen/Dense>

#include <featuresort/types.hpp>

namespace featuresort {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateMatrix = Eigen::Matrix<double, 8, 8>;
using Measurement = Eigen::Vector4d;  // (cx, cy, a = w/h, h)
using MeasurementMatrix = Eigen::Matrix4d;
using EmissionMatrix = Eigen::Matrix<double, 4, 8>;

/// Constant-velocity filter state over (cx, cy, a, h) and their velocities.
struct KalmanState {
    StateVector mean = StateVector::Zero();
    StateMatrix cov = StateMatrix::Zero();
};

/// Filter matrices. The transition and emission matrices are constant per
/// sequence; process and measurement noise scale with the current box height,
/// the usual heuristic when no noise magnitudes are known.
struct KalmanParams {
    StateMatrix transition = StateMatrix::Identity();  // G, dt = 1 frame
    EmissionMatrix emission = EmissionMatrix::Zero();  // H selects (cx,cy,a,h)
    double std_weight_pos = 1.0 / 20.0;
    double std_weight_vel = 1.0 / 160.0;

    static KalmanParams standard();

    StateMatrix process_noise(double box_height) const;        // Q(t)
    MeasurementMatrix measurement_noise(double box_height) const;  // R(t)
};

Measurement box_to_measurement(const BBox& box);
BBox measurement_to_box(const Measurement& z);

/// Fresh track state: measurement components from the box, zero velocity,
/// covariance scaled by box height.
KalmanState initiate_state(const BBox& box, const KalmanParams& params);

/// Prediction step: mean' = G mean, cov' = G cov G^T + Q.
KalmanState predict(const KalmanState& state, const KalmanParams& params);

/// Confidence-scaled measurement noise: (1 - conf) * R. Confidences outside
/// [0, 1] are clamped (with a warning).
MeasurementMatrix nsa_noise(const MeasurementMatrix& noise, double conf);

/// Measurement update with confidence-scaled noise. A numerically singular
/// innovation covariance is regularized by adding 1e-9*I; `regularized`
/// reports whether that happened. The height component of the posterior mean
/// is clamped positive.
KalmanState update(const KalmanState& predicted, const Measurement& z, double conf,
                   const KalmanParams& params, bool* regularized = nullptr);

/// Euclidean distance between the predicted and measured centers, divided by
/// the frame diagonal so the value is resolution-independent.
double gating_distance(const KalmanState& predicted, const Measurement& z,
                       double frame_diagonal);

/// Box implied by the state mean.
BBox state_box(const KalmanState& state);

}  // namespace featuresort
