#pragma once

#include <Eigen/Dense>

#include <deque>
#include <optional>

#include <featuresort/config.hpp>
#include <featuresort/types.hpp>

namespace featuresort {

/// Per-track appearance state: bounded color/style stacks, the single
/// direction slot, the EMA embedding, and the periodic EMA snapshots kept for
/// offline linking.
struct FeatureBank {
    std::deque<Eigen::VectorXd> colors;  // <= stack_len, oldest first
    std::deque<Eigen::VectorXd> styles;  // <= stack_len, oldest first
    std::optional<int> direction_bin;    // at most one value
    Eigen::VectorXd ema;                 // unit norm once initialized
    std::deque<Eigen::VectorXd> ema_snapshots;  // <= b_link
    long long update_count = 0;

    bool ema_initialized() const { return ema.size() > 0; }
};

/// 1 - <e, f> for unit vectors; in [0, 2].
double cosine_distance(const Eigen::VectorXd& e, const Eigen::VectorXd& f);

/// Cosine distance between the track's EMA embedding and a detection
/// embedding. An uninitialized bank yields the maximum distance 2.
double edge_distance(const FeatureBank& bank, const Eigen::VectorXd& f);

/// EMA step: ema' = normalize(alpha * ema + (1 - alpha) * f). Initializes the
/// EMA to f on first call. Every k_snap-th update (including the first) the
/// new EMA is snapshotted into the linking bank, which keeps at most b_link
/// entries, oldest evicted.
void ema_update(FeatureBank& bank, const Eigen::VectorXd& f, double alpha,
                int k_snap, int b_link);

/// Element-wise binary cross-entropy, summed:
///   -sum_k a_k log(b_k) + (1 - a_k) log(1 - b_k).
/// `a` is the label side, `b` the prediction side; b is clamped away from
/// {0, 1} before the logs.
double ce_vector_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Minimum cross-entropy between the color stack entries (label side) and the
/// detection color vector. Requires a non-empty stack.
double color_distance(const FeatureBank& bank, const Eigen::VectorXd& c);

/// Same as color_distance over the style stack.
double style_distance(const FeatureBank& bank, const Eigen::VectorXd& s);

/// Circular Gaussian over 72 heading bins:
///   phi(gtd, k, sigma) = exp(-d^2 / (2 sigma^2)) / sqrt(2 pi sigma^2),
/// with d = min(|k - gtd|, 72 - |k - gtd|).
double circular_gaussian(int gtd, int k, double sigma);

/// The full unnormalized 72-bin template centered at `gtd`.
Eigen::VectorXd circular_gaussian_template(int gtd, double sigma);

/// Sum of squared residuals between the detection's direction probabilities
/// and the circular-Gaussian template at the stored bin. Requires the slot to
/// be set; callers treat an empty slot as a passing gate.
double direction_distance(const FeatureBank& bank, const Eigen::VectorXd& p,
                          double sigma);

/// Appends a matched detection's features: color/style pushed with eviction
/// at the stack limit, direction slot set to argmax of the direction vector
/// (lowest bin wins ties), EMA updated.
void stack_append(FeatureBank& bank, const Detection& det, const TrackerConfig& cfg);

}  // namespace featuresort
