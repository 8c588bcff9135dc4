#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include <featuresort/types.hpp>

namespace featuresort {

/// Waypoint on an agent's path: center position reached at `frame`. Motion
/// between waypoints is constant velocity.
struct Waypoint {
    int frame = 0;
    double x = 0.0;
    double y = 0.0;
};

/// Ground-truth actor of a synthetic scene.
struct AgentSpec {
    int identity = 0;
    int class_id = 0;
    int spawn = 1;
    int despawn = 1;
    std::vector<Waypoint> waypoints;
    std::vector<int> color_bits;  // indices set in the two-hot color label
    int style_bit = 0;            // index set in the one-hot style label
    Eigen::VectorXd embedding;    // fixed unit identity vector
    double w = 36.0;
    double h = 72.0;

    BBox box_at(int frame) const;      // top-left box from the path
    int heading_bin_at(int frame) const;  // 5-degree bin of the velocity
};

/// Occluder rectangle active during [from, to].
struct Occluder {
    BBox box;
    int from = 0;
    int to = 0;
};

/// Observation noise knobs. All draws come from one seeded generator, so a
/// fixed seed reproduces the files byte for byte.
struct NoiseModel {
    double box_jitter_std = 0.0;      // px, on center; size jitters at half
    double drop_prob = 0.0;           // per agent-frame
    double fp_rate = 0.0;             // expected false positives per frame
    double conf_base = 1.0;
    double conf_occl_penalty = 0.0;   // scaled by occluded fraction
    double conf_noise_std = 0.0;
    double embedding_noise_std = 0.0; // before renormalization
    double label_blur = 0.0;          // blends color/style labels toward 0.5
    double label_flip_prob = 0.0;     // per vector: one hot index relocated
    double dir_blur_sigma = 2.0;      // observation template width; 0 = one-hot
    double occl_drop_coverage = 0.5;  // covered fraction at which a det drops
    std::vector<Occluder> occluders;
    std::uint64_t seed = 1;
};

struct Scenario {
    std::string name;
    int frames = 0;
    double frame_width = 1920.0;
    double frame_height = 1080.0;
    int embedding_dim = 128;
    std::vector<AgentSpec> agents;
    NoiseModel noise;
};

struct SynthOutput {
    std::vector<Detection> detections;   // normalized, (frame, agent-order)
    std::vector<Trajectory> truth;       // one per identity, exact boxes
};

/// Deterministic unit embedding derived from an identity (and a salt), so the
/// same agent keeps its appearance across seeds.
Eigen::VectorXd identity_embedding(int identity, int dim, std::uint64_t salt = 0);

/// Unit vector with a prescribed cosine similarity to `base`.
Eigen::VectorXd embedding_with_similarity(const Eigen::VectorXd& base, double cos_sim,
                                          std::uint64_t salt);

/// Renders the scenario: per frame, each live agent becomes a jittered,
/// possibly dropped detection with noisy features; false positives are
/// injected; the truth side records exact boxes for every live agent.
/// Rejects duplicate agent identities.
SynthOutput generate(const Scenario& scenario);

/// Names of the built-in scenarios.
std::vector<std::string> preset_names();

/// Builds a preset by name. `seed` drives the noise (and, for crowd_20, the
/// random walks); `frames_override` > 0 replaces the default length.
/// Throws DataError for unknown names.
Scenario make_preset(const std::string& name, std::uint64_t seed, int frames_override = 0);

/// Loads a scenario from the documented [world]/[noise]/[agent] section file.
Scenario load_scenario_file(const std::string& path);

}  // namespace featuresort
