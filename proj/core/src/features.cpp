#include <featuresort/features.hpp>

#include <algorithm>
#include <cmath>

namespace featuresort {

double cosine_distance(const Eigen::VectorXd& e, const Eigen::VectorXd& f) {
    return 1.0 - e.dot(f);
}

double edge_distance(const FeatureBank& bank, const Eigen::VectorXd& f) {
    if (!bank.ema_initialized()) return 2.0;
    return cosine_distance(bank.ema, f);
}

void ema_update(FeatureBank& bank, const Eigen::VectorXd& f, double alpha,
                int k_snap, int b_link) {
    if (!bank.ema_initialized()) {
        bank.ema = f;
    } else {
        bank.ema = alpha * bank.ema + (1.0 - alpha) * f;
        const double norm = bank.ema.norm();
        if (norm > 0.0) bank.ema /= norm;
    }
    if (bank.update_count % k_snap == 0) {
        bank.ema_snapshots.push_back(bank.ema);
        while (static_cast<int>(bank.ema_snapshots.size()) > b_link) {
            bank.ema_snapshots.pop_front();
        }
    }
    ++bank.update_count;
}

double ce_vector_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        const double bk = std::clamp(b[k], kEpsProb, 1.0 - kEpsProb);
        sum += a[k] * std::log(bk) + (1.0 - a[k]) * std::log(1.0 - bk);
    }
    return -sum;
}

namespace {

double min_ce_over_stack(const std::deque<Eigen::VectorXd>& stack, const Eigen::VectorXd& v) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& entry : stack) {
        best = std::min(best, ce_vector_distance(entry, v));
    }
    return best;
}

}  // namespace

double color_distance(const FeatureBank& bank, const Eigen::VectorXd& c) {
    return min_ce_over_stack(bank.colors, c);
}

double style_distance(const FeatureBank& bank, const Eigen::VectorXd& s) {
    return min_ce_over_stack(bank.styles, s);
}

double circular_gaussian(int gtd, int k, double sigma) {
    const double diff = std::abs(static_cast<double>(k - gtd));
    const double d = std::min(diff, kDirectionBins - diff);
    return std::exp(-d * d / (2.0 * sigma * sigma)) / std::sqrt(2.0 * M_PI * sigma * sigma);
}

Eigen::VectorXd circular_gaussian_template(int gtd, double sigma) {
    Eigen::VectorXd t(kDirectionBins);
    for (int k = 0; k < kDirectionBins; ++k) {
        t[k] = circular_gaussian(gtd, k, sigma);
    }
    return t;
}

double direction_distance(const FeatureBank& bank, const Eigen::VectorXd& p,
                          double sigma) {
    const int dir = bank.direction_bin.value();
    double sum = 0.0;
    for (int k = 0; k < kDirectionBins; ++k) {
        const double r = p[k] - circular_gaussian(dir, k, sigma);
        sum += r * r;
    }
    return sum;
}

void stack_append(FeatureBank& bank, const Detection& det, const TrackerConfig& cfg) {
    bank.colors.push_back(det.color);
    while (static_cast<int>(bank.colors.size()) > cfg.stack_len) bank.colors.pop_front();
    bank.styles.push_back(det.style);
    while (static_cast<int>(bank.styles.size()) > cfg.stack_len) bank.styles.pop_front();

    // argmax with lowest-bin tie break
    int best = 0;
    for (int k = 1; k < kDirectionBins; ++k) {
        if (det.direction[k] > det.direction[best]) best = k;
    }
    bank.direction_bin = best;

    ema_update(bank, det.embedding, cfg.alpha, cfg.k_snap, cfg.b_link);
}

}  // namespace featuresort
