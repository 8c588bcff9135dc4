#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace featuresort {

inline constexpr int kColorBins = 10;
inline constexpr int kStyleBins = 20;
inline constexpr int kDirectionBins = 72;

// Clamp applied to color/style entries before any log is taken.
inline constexpr double kEpsProb = 1e-7;

/// Raised for malformed or inconsistent input data. The CLI maps this to
/// exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A detection whose embedding has zero norm cannot be normalized and is
/// rejected with this distinct error.
class ZeroNormEmbeddingError : public DataError {
public:
    explicit ZeroNormEmbeddingError(const std::string& what) : DataError(what) {}
};

/// Axis-aligned box in pixel coordinates, (x, y) top-left, w/h > 0.
struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double area() const { return w * h; }
    double cx() const { return x + 0.5 * w; }
    double cy() const { return y + 0.5 * h; }
    bool valid() const { return w > 0.0 && h > 0.0; }
};

/// Intersection-over-union of two boxes. Symmetric, in [0, 1], zero for
/// disjoint boxes.
double iou(const BBox& a, const BBox& b);

/// One frame observation: box, confidence, class and the four precomputed
/// feature vectors (ReID embedding, color, style, direction).
struct Detection {
    int frame = 0;
    BBox box;
    double conf = 0.0;
    int class_id = 0;
    Eigen::VectorXd embedding;  // unit norm after normalize_detection
    Eigen::VectorXd color;      // length 10, entries clamped to [eps, 1-eps]
    Eigen::VectorXd style;      // length 20, entries clamped to [eps, 1-eps]
    Eigen::VectorXd direction;  // length 72, sums to 1
};

/// Normalizes a raw detection in place and returns it: L2-normalizes the
/// embedding, renormalizes the direction vector to sum 1, clamps color and
/// style entries into [eps_prob, 1-eps_prob] and the confidence into [0, 1].
///
/// Throws ZeroNormEmbeddingError for a zero-norm embedding and DataError for
/// wrong vector lengths or a zero-sum direction vector.
Detection normalize_detection(Detection raw);

/// One output row of a finished tracklet.
struct TrajectoryPoint {
    int frame = 0;
    BBox box;
    double conf = 0.0;
    bool interpolated = false;
};

/// A finished tracklet: per-frame boxes plus the retained embedding bank
/// used by offline linking.
struct Trajectory {
    int track_id = 0;
    int class_id = 0;
    std::vector<TrajectoryPoint> points;  // frames strictly increasing
    double conf_mean = 0.0;
    std::vector<Eigen::VectorXd> embedding_bank;

    int first_frame() const { return points.empty() ? 0 : points.front().frame; }
    int last_frame() const { return points.empty() ? 0 : points.back().frame; }
};

/// Mean confidence over non-interpolated points (0 when there are none).
double trajectory_conf_mean(const Trajectory& traj);

}  // namespace featuresort
