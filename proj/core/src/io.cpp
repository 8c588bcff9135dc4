#include <featuresort/io.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace featuresort {

namespace {

std::string with_suffix(const std::string& base_path, const std::string& suffix) {
    const std::string ext = ".csv";
    if (base_path.size() > ext.size() &&
        base_path.compare(base_path.size() - ext.size(), ext.size(), ext) == 0) {
        return base_path.substr(0, base_path.size() - ext.size()) + suffix + ext;
    }
    return base_path + suffix;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

[[noreturn]] void fail_at(const std::string& path, int lineno, const std::string& what) {
    throw DataError(path + ":" + std::to_string(lineno) + ": " + what);
}

double parse_double_field(const std::string& path, int lineno, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail_at(path, lineno, "cannot parse '" + s + "' as a number");
    }
}

int parse_int_field(const std::string& path, int lineno, const std::string& s) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail_at(path, lineno, "cannot parse '" + s + "' as an integer");
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::string features_sidecar_path(const std::string& base_path) {
    return with_suffix(base_path, ".features");
}

std::string bank_sidecar_path(const std::string& base_path) {
    return with_suffix(base_path, ".bank");
}

std::string format_float(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

std::vector<Detection> read_detections(const std::string& path) {
    std::ifstream base(path);
    if (!base) throw DataError("cannot open detections file: " + path);

    const std::string sidecar = features_sidecar_path(path);
    std::ifstream feats(sidecar);
    if (!feats) {
        throw DataError("missing feature sidecar for " + path + " (expected " + sidecar + ")");
    }

    // Sidecar header declares the embedding dimension.
    std::string header;
    if (!std::getline(feats, header)) throw DataError(sidecar + ": empty sidecar");
    int dim = 0;
    if (std::sscanf(header.c_str(), "# d=%d", &dim) != 1 || dim <= 0) {
        fail_at(sidecar, 1, "expected header '# d=<embedding_dim>'");
    }

    std::vector<Detection> dets;
    std::string line;
    int lineno = 0;
    while (std::getline(base, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 8) {
            fail_at(path, lineno, "expected 8 fields (frame,-1,x,y,w,h,conf,class_id), got " +
                                      std::to_string(fields.size()));
        }
        Detection d;
        d.frame = parse_int_field(path, lineno, fields[0]);
        d.box.x = parse_double_field(path, lineno, fields[2]);
        d.box.y = parse_double_field(path, lineno, fields[3]);
        d.box.w = parse_double_field(path, lineno, fields[4]);
        d.box.h = parse_double_field(path, lineno, fields[5]);
        d.conf = parse_double_field(path, lineno, fields[6]);
        d.class_id = parse_int_field(path, lineno, fields[7]);
        if (d.frame < 1) fail_at(path, lineno, "frame index must be >= 1");
        if (!d.box.valid()) fail_at(path, lineno, "box must have positive width and height");
        dets.push_back(std::move(d));
    }

    const int feature_fields = dim + kColorBins + kStyleBins + kDirectionBins;
    std::size_t row = 0;
    int feat_lineno = 1;
    int prev_frame = 0;
    int row_in_frame = 0;
    while (std::getline(feats, line)) {
        ++feat_lineno;
        if (line.empty()) continue;
        if (row >= dets.size()) {
            fail_at(sidecar, feat_lineno, "more feature rows than detection rows");
        }
        const auto fields = split_csv(line);
        if (static_cast<int>(fields.size()) != 2 + feature_fields) {
            fail_at(sidecar, feat_lineno,
                    "expected " + std::to_string(2 + feature_fields) + " fields, got " +
                        std::to_string(fields.size()));
        }
        const int frame = parse_int_field(sidecar, feat_lineno, fields[0]);
        const int index = parse_int_field(sidecar, feat_lineno, fields[1]);
        if (frame != prev_frame) {
            prev_frame = frame;
            row_in_frame = 0;
        }
        Detection& d = dets[row];
        if (frame != d.frame || index != row_in_frame) {
            fail_at(sidecar, feat_lineno,
                    "sidecar key (" + std::to_string(frame) + "," + std::to_string(index) +
                        ") does not match detection row order");
        }
        ++row_in_frame;

        d.embedding.resize(dim);
        d.color.resize(kColorBins);
        d.style.resize(kStyleBins);
        d.direction.resize(kDirectionBins);
        int f = 2;
        for (int k = 0; k < dim; ++k) d.embedding[k] = parse_double_field(sidecar, feat_lineno, fields[f++]);
        for (int k = 0; k < kColorBins; ++k) d.color[k] = parse_double_field(sidecar, feat_lineno, fields[f++]);
        for (int k = 0; k < kStyleBins; ++k) d.style[k] = parse_double_field(sidecar, feat_lineno, fields[f++]);
        for (int k = 0; k < kDirectionBins; ++k) d.direction[k] = parse_double_field(sidecar, feat_lineno, fields[f++]);
        try {
            d = normalize_detection(std::move(d));
        } catch (const DataError& e) {
            fail_at(sidecar, feat_lineno, e.what());
        }
        ++row;
    }
    if (row != dets.size()) {
        throw DataError(sidecar + ": " + std::to_string(dets.size() - row) +
                        " detection rows lack feature rows");
    }
    return dets;
}

void write_detections(const std::string& path, const std::vector<Detection>& dets,
                      int embedding_dim) {
    auto base = open_out(path);
    auto feats = open_out(features_sidecar_path(path));
    feats << "# d=" << embedding_dim << "\n";

    int prev_frame = 0;
    int row_in_frame = 0;
    for (const auto& d : dets) {
        base << d.frame << ",-1," << format_float(d.box.x) << ',' << format_float(d.box.y)
             << ',' << format_float(d.box.w) << ',' << format_float(d.box.h) << ','
             << format_float(d.conf) << ',' << d.class_id << "\n";
        if (d.frame != prev_frame) {
            prev_frame = d.frame;
            row_in_frame = 0;
        }
        feats << d.frame << ',' << row_in_frame++;
        for (int k = 0; k < embedding_dim; ++k) feats << ',' << format_float(d.embedding[k]);
        for (int k = 0; k < kColorBins; ++k) feats << ',' << format_float(d.color[k]);
        for (int k = 0; k < kStyleBins; ++k) feats << ',' << format_float(d.style[k]);
        for (int k = 0; k < kDirectionBins; ++k) feats << ',' << format_float(d.direction[k]);
        feats << "\n";
    }
}

std::vector<Trajectory> read_trajectories(const std::string& path, bool with_banks) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open trajectory file: " + path);

    struct RowsById {
        int class_id = 0;
        std::vector<TrajectoryPoint> points;
    };
    std::map<int, RowsById> by_id;
    std::set<std::pair<int, int>> seen;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 9) {
            fail_at(path, lineno,
                    "expected 9 fields (frame,track_id,x,y,w,h,conf,class_id,interpolated), got " +
                        std::to_string(fields.size()));
        }
        const int frame = parse_int_field(path, lineno, fields[0]);
        const int track_id = parse_int_field(path, lineno, fields[1]);
        if (!seen.insert({frame, track_id}).second) {
            fail_at(path, lineno, "duplicate (frame, track_id) pair");
        }
        TrajectoryPoint p;
        p.frame = frame;
        p.box.x = parse_double_field(path, lineno, fields[2]);
        p.box.y = parse_double_field(path, lineno, fields[3]);
        p.box.w = parse_double_field(path, lineno, fields[4]);
        p.box.h = parse_double_field(path, lineno, fields[5]);
        p.conf = parse_double_field(path, lineno, fields[6]);
        const int class_id = parse_int_field(path, lineno, fields[7]);
        const int interp = parse_int_field(path, lineno, fields[8]);
        if (interp != 0 && interp != 1) fail_at(path, lineno, "interpolated flag must be 0 or 1");
        p.interpolated = interp == 1;
        if (!p.box.valid()) fail_at(path, lineno, "box must have positive width and height");

        auto& entry = by_id[track_id];
        if (!entry.points.empty() && entry.class_id != class_id) {
            fail_at(path, lineno, "track " + std::to_string(track_id) + " changes class_id");
        }
        entry.class_id = class_id;
        entry.points.push_back(p);
    }

    std::vector<Trajectory> trajs;
    for (auto& [track_id, entry] : by_id) {
        Trajectory t;
        t.track_id = track_id;
        t.class_id = entry.class_id;
        std::sort(entry.points.begin(), entry.points.end(),
                  [](const TrajectoryPoint& a, const TrajectoryPoint& b) {
                      return a.frame < b.frame;
                  });
        t.points = std::move(entry.points);
        t.conf_mean = trajectory_conf_mean(t);
        trajs.push_back(std::move(t));
    }

    if (with_banks) {
        const std::string sidecar = bank_sidecar_path(path);
        std::ifstream banks(sidecar);
        if (!banks) {
            throw DataError("missing embedding-bank sidecar for " + path + " (expected " +
                            sidecar + ")");
        }
        std::string header;
        if (!std::getline(banks, header)) throw DataError(sidecar + ": empty sidecar");
        int dim = 0;
        if (std::sscanf(header.c_str(), "# d=%d", &dim) != 1 || dim <= 0) {
            fail_at(sidecar, 1, "expected header '# d=<embedding_dim>'");
        }
        std::map<int, Trajectory*> traj_of;
        for (auto& t : trajs) traj_of[t.track_id] = &t;

        int bank_lineno = 1;
        while (std::getline(banks, line)) {
            ++bank_lineno;
            if (line.empty()) continue;
            const auto fields = split_csv(line);
            if (static_cast<int>(fields.size()) != 2 + dim) {
                fail_at(sidecar, bank_lineno,
                        "expected " + std::to_string(2 + dim) + " fields, got " +
                            std::to_string(fields.size()));
            }
            const int track_id = parse_int_field(sidecar, bank_lineno, fields[0]);
            const auto it = traj_of.find(track_id);
            if (it == traj_of.end()) {
                fail_at(sidecar, bank_lineno,
                        "bank row for unknown track " + std::to_string(track_id));
            }
            Eigen::VectorXd v(dim);
            for (int k = 0; k < dim; ++k) {
                v[k] = parse_double_field(sidecar, bank_lineno, fields[2 + k]);
            }
            const double norm = v.norm();
            if (norm > 0.0) v /= norm;
            it->second->embedding_bank.push_back(std::move(v));
        }
        for (const auto& t : trajs) {
            if (t.embedding_bank.empty() && !t.points.empty()) {
                throw DataError(sidecar + ": track " + std::to_string(t.track_id) +
                                " has no embedding bank");
            }
        }
    }
    return trajs;
}

void write_trajectories(const std::string& path, const std::vector<Trajectory>& trajs,
                        bool with_banks, int embedding_dim) {
    // Rows sorted by (frame, track_id).
    std::vector<std::pair<const Trajectory*, const TrajectoryPoint*>> rows;
    for (const auto& t : trajs) {
        for (const auto& p : t.points) rows.emplace_back(&t, &p);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second->frame != b.second->frame) return a.second->frame < b.second->frame;
        return a.first->track_id < b.first->track_id;
    });

    auto out = open_out(path);
    for (const auto& [traj, p] : rows) {
        out << p->frame << ',' << traj->track_id << ',' << format_float(p->box.x) << ','
            << format_float(p->box.y) << ',' << format_float(p->box.w) << ','
            << format_float(p->box.h) << ',' << format_float(p->conf) << ','
            << traj->class_id << ',' << (p->interpolated ? 1 : 0) << "\n";
    }

    if (with_banks) {
        auto banks = open_out(bank_sidecar_path(path));
        banks << "# d=" << embedding_dim << "\n";
        std::vector<const Trajectory*> sorted;
        for (const auto& t : trajs) sorted.push_back(&t);
        std::sort(sorted.begin(), sorted.end(), [](const Trajectory* a, const Trajectory* b) {
            return a->track_id < b->track_id;
        });
        for (const Trajectory* t : sorted) {
            int index = 0;
            for (const auto& v : t->embedding_bank) {
                banks << t->track_id << ',' << index++;
                for (int k = 0; k < embedding_dim; ++k) banks << ',' << format_float(v[k]);
                banks << "\n";
            }
        }
    }
}

}  // namespace featuresort
