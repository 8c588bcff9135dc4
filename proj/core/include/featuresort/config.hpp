#pragma once

#include <string>

namespace featuresort {

/// Gaussian-smoothing interpolation settings, applied per coordinate of
/// (x, y, w, h).
struct GspConfig {
    int max_gap = 20;           // longest gap (frames) filled by interpolation
    double length_scale = 10.0; // RBF kernel length-scale, in frames
    double noise_var = 1.0;     // observation noise variance, px^2
};

/// Offline tracklet-linking settings.
struct LinkConfig {
    int temporal_max = 20;    // max frame gap between linked tracklets
    double spatial_max = 70.0; // max center distance (px) across the gap
    double accept_sim = 0.9;  // min cosine similarity to accept a link
    int bank_cap = 16;        // embedding bank size kept after a merge
};

/// Online tracker settings. Defaults follow the reference configuration;
/// dir_max and sigma_dir have no canonical values and are tuning knobs.
struct TrackerConfig {
    double lambda_motion = 0.1;
    double lambda_edge = 0.4;
    double lambda_color = 0.25;
    double lambda_style = 0.25;
    double iou_min = 0.45;
    double dir_max = 0.5;
    double d_max = 1e4;
    double epsilon = 1e-3;
    double alpha = 0.8;      // EMA momentum
    int age_max = 10;        // frames a track may coast before deletion
    double conf_min = 0.5;   // detections below this are ignored
    int stack_len = 30;      // color/style stack capacity (SL)
    double sigma_dir = 2.0;  // direction template width, bins
    int n_init = 3;          // hits required to confirm a track
    int embedding_dim = 128;
    int k_snap = 5;          // EMA snapshot period for the linking bank
    int b_link = 16;         // max EMA snapshots retained per track
    double frame_width = 1920.0;
    double frame_height = 1080.0;
    std::string matching = "vanilla";  // "cascade" is reserved, not implemented

    double frame_diagonal() const;

    /// Throws DataError if any field violates its invariant.
    void validate() const;
};

/// Everything a run can configure, grouped by config-file section prefix.
struct RunConfig {
    TrackerConfig tracker;
    GspConfig gsp;
    LinkConfig link;
    unsigned long long synth_seed = 1;
    int synth_frames = 0;  // 0 = use the scenario's own frame count

    void validate() const;
};

/// Applies one "section.key = value" pair. Throws DataError for unknown keys
/// or unparsable values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Loads a flat key-value config file ('#' comments, blank lines allowed)
/// on top of the given defaults. Later entries win.
void load_config_file(RunConfig& cfg, const std::string& path);

}  // namespace featuresort
