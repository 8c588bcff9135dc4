#include <featuresort/types.hpp>

#include <algorithm>
#include <cmath>

namespace featuresort {

double iou(const BBox& a, const BBox& b) {
    const double ix = std::max(a.x, b.x);
    const double iy = std::max(a.y, b.y);
    const double ix2 = std::min(a.x + a.w, b.x + b.w);
    const double iy2 = std::min(a.y + a.h, b.y + b.h);
    const double iw = std::max(0.0, ix2 - ix);
    const double ih = std::max(0.0, iy2 - iy);
    const double inter = iw * ih;
    if (inter <= 0.0) return 0.0;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

namespace {

void require_length(const Eigen::VectorXd& v, int n, const char* name) {
    if (v.size() != n) {
        throw DataError(std::string("detection ") + name + " has length " +
                        std::to_string(v.size()) + ", expected " + std::to_string(n));
    }
}

}  // namespace

Detection normalize_detection(Detection raw) {
    if (raw.embedding.size() == 0) {
        throw DataError("detection embedding is empty");
    }
    require_length(raw.color, kColorBins, "color vector");
    require_length(raw.style, kStyleBins, "style vector");
    require_length(raw.direction, kDirectionBins, "direction vector");

    const double norm = raw.embedding.norm();
    if (norm <= 0.0) {
        throw ZeroNormEmbeddingError("detection embedding has zero norm (frame " +
                                     std::to_string(raw.frame) + ")");
    }
    raw.embedding /= norm;

    const double dir_sum = raw.direction.sum();
    if (dir_sum <= 0.0) {
        throw DataError("detection direction vector sums to zero (frame " +
                        std::to_string(raw.frame) + ")");
    }
    raw.direction /= dir_sum;

    auto clamp_probs = [](Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            v[i] = std::clamp(v[i], kEpsProb, 1.0 - kEpsProb);
        }
    };
    clamp_probs(raw.color);
    clamp_probs(raw.style);
    raw.conf = std::clamp(raw.conf, 0.0, 1.0);
    return raw;
}

double trajectory_conf_mean(const Trajectory& traj) {
    double sum = 0.0;
    int n = 0;
    for (const auto& p : traj.points) {
        if (!p.interpolated) {
            sum += p.conf;
            ++n;
        }
    }
    return n > 0 ? sum / n : 0.0;
}

}  // namespace featuresort
