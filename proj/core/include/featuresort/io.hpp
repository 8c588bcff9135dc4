#pragma once

#include <string>
#include <vector>

#include <featuresort/types.hpp>

namespace featuresort {

/// Detection files are MOT-style CSV rows
///   frame,-1,x,y,w,h,conf,class_id
/// plus a feature sidecar `<base>.features.csv` whose first line declares the
/// embedding dimension (`# d=128`) and whose rows are
///   frame,row_index,<d embedding>,<10 color>,<20 style>,<72 direction>
/// in the same order as the base rows. All floats use 4 decimal places.

/// Sidecar path for a detection or trajectory file.
std::string features_sidecar_path(const std::string& base_path);
std::string bank_sidecar_path(const std::string& base_path);

/// Reads detections plus their mandatory feature sidecar, normalizing each
/// detection on ingest. Errors carry the offending file and line.
std::vector<Detection> read_detections(const std::string& path);

/// Writes the base file and the feature sidecar.
void write_detections(const std::string& path, const std::vector<Detection>& dets,
                      int embedding_dim);

/// Trajectory files are CSV rows
///   frame,track_id,x,y,w,h,conf,class_id,interpolated_flag
/// sorted by (frame, track_id), one row per (frame, track_id). The optional
/// bank sidecar `<base>.bank.csv` declares d on its first line and holds rows
///   track_id,snapshot_index,<d embedding>.

/// Reads trajectories; loads embedding banks from the sidecar when
/// `with_banks` (missing or inconsistent sidecar is an error then).
std::vector<Trajectory> read_trajectories(const std::string& path, bool with_banks);

/// Writes the trajectory file (and the bank sidecar when `with_banks`).
void write_trajectories(const std::string& path, const std::vector<Trajectory>& trajs,
                        bool with_banks, int embedding_dim);

/// Fixed 4-decimal float formatting used by every writer.
std::string format_float(double value);

}  // namespace featuresort
