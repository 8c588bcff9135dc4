#include <featuresort/synth.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <featuresort/features.hpp>

namespace featuresort {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

BBox AgentSpec::box_at(int frame) const {
    double cx = 0.0;
    double cy = 0.0;
    if (waypoints.empty()) {
        cx = cy = 0.0;
    } else if (frame <= waypoints.front().frame) {
        cx = waypoints.front().x;
        cy = waypoints.front().y;
    } else if (frame >= waypoints.back().frame) {
        cx = waypoints.back().x;
        cy = waypoints.back().y;
    } else {
        for (std::size_t i = 1; i < waypoints.size(); ++i) {
            if (frame <= waypoints[i].frame) {
                const auto& a = waypoints[i - 1];
                const auto& b = waypoints[i];
                const double t = static_cast<double>(frame - a.frame) / (b.frame - a.frame);
                cx = a.x + t * (b.x - a.x);
                cy = a.y + t * (b.y - a.y);
                break;
            }
        }
    }
    return BBox{cx - 0.5 * w, cy - 0.5 * h, w, h};
}

int AgentSpec::heading_bin_at(int frame) const {
    // Velocity of the active segment; falls back to the last moving segment.
    double vx = 0.0, vy = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        const auto& a = waypoints[i - 1];
        const auto& b = waypoints[i];
        const double dt = b.frame - a.frame;
        if (dt <= 0) continue;
        const double sx = (b.x - a.x) / dt;
        const double sy = (b.y - a.y) / dt;
        const bool moving = sx != 0.0 || sy != 0.0;
        if (frame > a.frame && frame <= b.frame) {
            if (moving) {
                vx = sx;
                vy = sy;
            }
            break;
        }
        if (moving) {
            vx = sx;
            vy = sy;
        }
        if (frame <= a.frame) break;
    }
    if (vx == 0.0 && vy == 0.0 && waypoints.size() >= 2) {
        // Stationary so far: use the first moving segment ahead.
        for (std::size_t i = 1; i < waypoints.size(); ++i) {
            const auto& a = waypoints[i - 1];
            const auto& b = waypoints[i];
            const double dt = b.frame - a.frame;
            if (dt <= 0) continue;
            if (b.x != a.x || b.y != a.y) {
                vx = (b.x - a.x) / dt;
                vy = (b.y - a.y) / dt;
                break;
            }
        }
    }
    if (vx == 0.0 && vy == 0.0) return 0;
    double deg = std::atan2(vy, vx) * 180.0 / M_PI;
    if (deg < 0.0) deg += 360.0;
    const int bin = static_cast<int>(std::lround(deg / 5.0)) % kDirectionBins;
    return bin;
}

Eigen::VectorXd identity_embedding(int identity, int dim, std::uint64_t salt) {
    std::mt19937_64 rng(splitmix64(static_cast<std::uint64_t>(identity) * 0x51ed2701ULL + salt));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    v.normalize();
    return v;
}

Eigen::VectorXd embedding_with_similarity(const Eigen::VectorXd& base, double cos_sim,
                                          std::uint64_t salt) {
    std::mt19937_64 rng(splitmix64(salt ^ 0xabcdef1234567ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd r(base.size());
    for (Eigen::Index i = 0; i < base.size(); ++i) r[i] = gauss(rng);
    r -= r.dot(base) * base;  // orthogonalize
    const double n = r.norm();
    if (n <= 0.0) return base;
    r /= n;
    const double s = std::clamp(cos_sim, -1.0, 1.0);
    Eigen::VectorXd v = s * base + std::sqrt(1.0 - s * s) * r;
    v.normalize();
    return v;
}

namespace {

Eigen::VectorXd label_vector(int size, const std::vector<int>& hot_bits) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
    for (const int bit : hot_bits) {
        if (bit >= 0 && bit < size) v[bit] = 1.0;
    }
    return v;
}

Eigen::VectorXd direction_observation(int heading_bin, double blur_sigma) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(kDirectionBins);
    if (blur_sigma <= 0.0) {
        p[heading_bin] = 1.0;
        return p;
    }
    p = circular_gaussian_template(heading_bin, blur_sigma);
    p /= p.sum();
    return p;
}

double occluded_fraction(const BBox& box, const std::vector<Occluder>& occluders, int frame) {
    double covered = 0.0;
    for (const auto& occ : occluders) {
        if (frame < occ.from || frame > occ.to) continue;
        const double ix = std::max(box.x, occ.box.x);
        const double iy = std::max(box.y, occ.box.y);
        const double ix2 = std::min(box.x + box.w, occ.box.x + occ.box.w);
        const double iy2 = std::min(box.y + box.h, occ.box.y + occ.box.h);
        const double inter = std::max(0.0, ix2 - ix) * std::max(0.0, iy2 - iy);
        covered = std::max(covered, inter / box.area());
    }
    return covered;
}

Eigen::VectorXd observe_label(const Eigen::VectorXd& truth, double blur, double flip_prob,
                              std::mt19937_64& rng) {
    Eigen::VectorXd obs = truth;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    if (flip_prob > 0.0 && uniform(rng) < flip_prob) {
        // Relocate one hot bit to a random cold one.
        std::vector<int> hot, cold;
        for (Eigen::Index k = 0; k < obs.size(); ++k) {
            (obs[k] > 0.5 ? hot : cold).push_back(static_cast<int>(k));
        }
        if (!hot.empty() && !cold.empty()) {
            const int from = hot[static_cast<std::size_t>(uniform(rng) * hot.size()) % hot.size()];
            const int to = cold[static_cast<std::size_t>(uniform(rng) * cold.size()) % cold.size()];
            obs[from] = 0.0;
            obs[to] = 1.0;
        }
    }
    if (blur > 0.0) {
        obs = (1.0 - blur) * obs + Eigen::VectorXd::Constant(obs.size(), blur * 0.5);
    }
    return obs;
}

}  // namespace

SynthOutput generate(const Scenario& scenario) {
    std::set<int> identities;
    for (const auto& agent : scenario.agents) {
        if (!identities.insert(agent.identity).second) {
            throw DataError("scenario '" + scenario.name + "' has duplicate agent identity " +
                            std::to_string(agent.identity));
        }
        if (agent.embedding.size() != scenario.embedding_dim) {
            throw DataError("agent " + std::to_string(agent.identity) +
                            " embedding dimension mismatch");
        }
    }

    std::mt19937_64 rng(splitmix64(scenario.noise.seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const NoiseModel& noise = scenario.noise;

    SynthOutput out;
    std::map<int, Trajectory> truth_by_id;
    std::vector<int> class_pool;
    for (const auto& agent : scenario.agents) class_pool.push_back(agent.class_id);
    std::sort(class_pool.begin(), class_pool.end());
    class_pool.erase(std::unique(class_pool.begin(), class_pool.end()), class_pool.end());
    if (class_pool.empty()) class_pool.push_back(0);

    for (int frame = 1; frame <= scenario.frames; ++frame) {
        for (const auto& agent : scenario.agents) {
            if (frame < agent.spawn || frame > agent.despawn) continue;
            const BBox true_box = agent.box_at(frame);

            auto& truth = truth_by_id[agent.identity];
            truth.track_id = agent.identity;
            truth.class_id = agent.class_id;
            truth.points.push_back({frame, true_box, 1.0, false});

            const double covered = occluded_fraction(true_box, noise.occluders, frame);
            // Draws happen for every live agent so dropping one detection
            // does not shift the rest of the stream.
            const double u_drop = uniform(rng);
            const double jx = gauss(rng), jy = gauss(rng), jw = gauss(rng), jh = gauss(rng);
            const double conf_eps = gauss(rng);
            Eigen::VectorXd emb = agent.embedding;
            if (noise.embedding_noise_std > 0.0) {
                for (Eigen::Index k = 0; k < emb.size(); ++k) {
                    emb[k] += noise.embedding_noise_std * gauss(rng);
                }
            }
            const Eigen::VectorXd color_obs =
                observe_label(label_vector(kColorBins, agent.color_bits), noise.label_blur,
                              noise.label_flip_prob, rng);
            const Eigen::VectorXd style_obs =
                observe_label(label_vector(kStyleBins, {agent.style_bit}), noise.label_blur,
                              noise.label_flip_prob, rng);

            if (covered >= noise.occl_drop_coverage) continue;
            if (u_drop < noise.drop_prob) continue;

            Detection d;
            d.frame = frame;
            d.class_id = agent.class_id;
            d.box.x = true_box.x + noise.box_jitter_std * jx;
            d.box.y = true_box.y + noise.box_jitter_std * jy;
            d.box.w = std::max(4.0, true_box.w + 0.5 * noise.box_jitter_std * jw);
            d.box.h = std::max(4.0, true_box.h + 0.5 * noise.box_jitter_std * jh);
            d.conf = std::clamp(noise.conf_base - noise.conf_occl_penalty * covered +
                                    noise.conf_noise_std * conf_eps,
                                0.05, 1.0);
            d.embedding = emb;
            d.color = color_obs;
            d.style = style_obs;
            d.direction = direction_observation(agent.heading_bin_at(frame), noise.dir_blur_sigma);
            out.detections.push_back(normalize_detection(std::move(d)));
        }

        if (noise.fp_rate > 0.0) {
            std::poisson_distribution<int> poisson(noise.fp_rate);
            const int n_fp = poisson(rng);
            for (int k = 0; k < n_fp; ++k) {
                Detection d;
                d.frame = frame;
                d.class_id =
                    class_pool[static_cast<std::size_t>(uniform(rng) * class_pool.size()) %
                               class_pool.size()];
                d.box.w = 20.0 + 40.0 * uniform(rng);
                d.box.h = 40.0 + 80.0 * uniform(rng);
                d.box.x = uniform(rng) * std::max(1.0, scenario.frame_width - d.box.w);
                d.box.y = uniform(rng) * std::max(1.0, scenario.frame_height - d.box.h);
                d.conf = 0.5 + 0.5 * uniform(rng);
                Eigen::VectorXd emb(scenario.embedding_dim);
                for (int i = 0; i < scenario.embedding_dim; ++i) emb[i] = gauss(rng);
                d.embedding = emb;
                d.color = Eigen::VectorXd::Constant(kColorBins, 0.0);
                d.color[static_cast<std::size_t>(uniform(rng) * kColorBins) % kColorBins] = 1.0;
                d.color = (1.0 - 0.2) * d.color + Eigen::VectorXd::Constant(kColorBins, 0.1);
                d.style = Eigen::VectorXd::Constant(kStyleBins, 0.0);
                d.style[static_cast<std::size_t>(uniform(rng) * kStyleBins) % kStyleBins] = 1.0;
                d.style = (1.0 - 0.2) * d.style + Eigen::VectorXd::Constant(kStyleBins, 0.1);
                const int bin = static_cast<int>(uniform(rng) * kDirectionBins) % kDirectionBins;
                d.direction = direction_observation(bin, std::max(noise.dir_blur_sigma, 1.0));
                out.detections.push_back(normalize_detection(std::move(d)));
            }
        }
    }

    for (auto& [id, traj] : truth_by_id) {
        traj.conf_mean = 1.0;
        out.truth.push_back(std::move(traj));
    }
    return out;
}

std::vector<std::string> preset_names() {
    return {"crossing_pair", "occlusion_corridor", "crowd_20", "two_class"};
}

namespace {

AgentSpec make_agent(int identity, int class_id, int spawn, int despawn,
                     std::vector<Waypoint> waypoints, std::vector<int> color_bits,
                     int style_bit, double w, double h, int dim) {
    AgentSpec a;
    a.identity = identity;
    a.class_id = class_id;
    a.spawn = spawn;
    a.despawn = despawn;
    a.waypoints = std::move(waypoints);
    a.color_bits = std::move(color_bits);
    a.style_bit = style_bit;
    a.w = w;
    a.h = h;
    a.embedding = identity_embedding(identity, dim);
    return a;
}

Scenario crossing_pair(std::uint64_t seed, int frames) {
    Scenario s;
    s.name = "crossing_pair";
    s.frames = frames > 0 ? frames : 90;
    const double lane = 540.0;
    const double half = 960.0;
    const double speed = 7.0;
    const double reach = speed * (s.frames - 1) / 2.0;

    // Two same-size agents walking toward each other along one lane; they
    // meet mid-frame under a brief occlusion. Colors differ sharply while
    // the ReID embeddings are nearly parallel, so edge features alone cannot
    // separate them.
    auto a = make_agent(1, 0, 1, s.frames,
                        {{1, half - reach, lane}, {s.frames, half + reach, lane}}, {0, 2}, 3,
                        36, 72, s.embedding_dim);
    auto b = make_agent(2, 0, 1, s.frames,
                        {{1, half + reach, lane}, {s.frames, half - reach, lane}}, {6, 8}, 3,
                        36, 72, s.embedding_dim);
    b.embedding = embedding_with_similarity(a.embedding, 0.98, 2);
    s.agents = {a, b};

    const int meet = (s.frames + 1) / 2;
    s.noise.box_jitter_std = 3.0;
    s.noise.drop_prob = 0.02;
    s.noise.fp_rate = 0.0;
    s.noise.conf_base = 0.95;
    s.noise.conf_noise_std = 0.02;
    s.noise.conf_occl_penalty = 0.3;
    s.noise.embedding_noise_std = 0.4;
    s.noise.label_blur = 0.1;
    s.noise.label_flip_prob = 0.0;
    s.noise.dir_blur_sigma = 2.0;
    s.noise.occluders = {{BBox{half - 40, lane - 90, 80, 180}, meet - 2, meet + 2}};
    s.noise.seed = seed;
    return s;
}

Scenario occlusion_corridor(std::uint64_t seed, int frames) {
    Scenario s;
    s.name = "occlusion_corridor";
    s.frames = frames > 0 ? frames : 150;
    const double speed = 4.0;
    const double start_x = 200.0;
    auto a = make_agent(1, 0, 1, s.frames,
                        {{1, start_x, 500.0}, {s.frames, start_x + speed * (s.frames - 1), 500.0}},
                        {1, 8}, 5, 36, 72, s.embedding_dim);
    s.agents = {a};

    // The occluder spans 48 px of the path: a 12-frame blackout, longer than
    // age_max, so the online track fragments and linking has work to do.
    const double occ_x = start_x + speed * 60;
    s.noise.box_jitter_std = 2.0;
    s.noise.drop_prob = 0.02;
    s.noise.conf_base = 0.95;
    s.noise.conf_noise_std = 0.02;
    s.noise.conf_occl_penalty = 0.4;
    s.noise.embedding_noise_std = 0.05;
    s.noise.label_blur = 0.1;
    s.noise.dir_blur_sigma = 2.0;
    s.noise.occluders = {{BBox{occ_x - 24, 500.0 - 100, 48, 200}, 1, s.frames}};
    s.noise.seed = seed;
    return s;
}

Scenario crowd_20(std::uint64_t seed, int frames) {
    Scenario s;
    s.name = "crowd_20";
    s.frames = frames > 0 ? frames : 300;
    std::mt19937_64 rng(splitmix64(seed ^ 0xc0ffee));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    for (int i = 0; i < 20; ++i) {
        const double w = 30.0 + 12.0 * uniform(rng);
        const double h = 2.0 * w;
        std::vector<Waypoint> path;
        double x = 100.0 + uniform(rng) * (s.frame_width - 200.0);
        double y = 100.0 + uniform(rng) * (s.frame_height - 200.0);
        path.push_back({1, x, y});
        for (int f = 60; f <= s.frames + 59; f += 60) {
            // Random-walk waypoints with bounded speed (<= ~4 px/frame).
            x = std::clamp(x + (uniform(rng) * 2.0 - 1.0) * 220.0, 60.0, s.frame_width - 60.0);
            y = std::clamp(y + (uniform(rng) * 2.0 - 1.0) * 220.0, 60.0, s.frame_height - 60.0);
            path.push_back({std::min(f, s.frames), x, y});
            if (f >= s.frames) break;
        }
        const int c1 = static_cast<int>(uniform(rng) * kColorBins) % kColorBins;
        const int c2 = static_cast<int>(uniform(rng) * kColorBins) % kColorBins;
        const int style = static_cast<int>(uniform(rng) * kStyleBins) % kStyleBins;
        s.agents.push_back(
            make_agent(i + 1, 0, 1, s.frames, std::move(path), {c1, c2}, style, w, h,
                       s.embedding_dim));
    }

    s.noise.box_jitter_std = 2.0;
    s.noise.drop_prob = 0.03;
    s.noise.fp_rate = 0.1;
    s.noise.conf_base = 0.9;
    s.noise.conf_noise_std = 0.03;
    s.noise.embedding_noise_std = 0.1;
    s.noise.label_blur = 0.15;
    s.noise.label_flip_prob = 0.01;
    s.noise.dir_blur_sigma = 2.0;
    s.noise.seed = seed;
    return s;
}

Scenario two_class(std::uint64_t seed, int frames) {
    Scenario s;
    s.name = "two_class";
    s.frames = frames > 0 ? frames : 100;
    const double reach = 3.0 * (s.frames - 1);

    // Pedestrians (class 0) and vehicles (class 1) sharing the same ground;
    // the vehicle lane crosses both pedestrian paths.
    s.agents = {
        make_agent(1, 0, 1, s.frames, {{1, 300, 400}, {s.frames, 300 + reach, 400}}, {0, 2}, 2,
                   36, 72, s.embedding_dim),
        make_agent(2, 0, 1, s.frames, {{1, 300 + reach, 430}, {s.frames, 300, 430}}, {7, 9}, 4,
                   36, 72, s.embedding_dim),
        make_agent(3, 1, 1, s.frames, {{1, 350, 415}, {s.frames, 350 + reach, 415}}, {1, 1}, 11,
                   110, 70, s.embedding_dim),
        make_agent(4, 1, 1, s.frames, {{1, 350 + reach, 445}, {s.frames, 350, 445}}, {8, 8}, 13,
                   110, 70, s.embedding_dim),
    };

    s.noise.box_jitter_std = 2.0;
    s.noise.drop_prob = 0.02;
    s.noise.conf_base = 0.9;
    s.noise.conf_noise_std = 0.02;
    s.noise.embedding_noise_std = 0.1;
    s.noise.label_blur = 0.1;
    s.noise.dir_blur_sigma = 2.0;
    s.noise.seed = seed;
    return s;
}

}  // namespace

Scenario make_preset(const std::string& name, std::uint64_t seed, int frames_override) {
    if (name == "crossing_pair") return crossing_pair(seed, frames_override);
    if (name == "occlusion_corridor") return occlusion_corridor(seed, frames_override);
    if (name == "crowd_20") return crowd_20(seed, frames_override);
    if (name == "two_class") return two_class(seed, frames_override);
    std::ostringstream os;
    os << "unknown scenario '" << name << "'; available presets:";
    for (const auto& preset : preset_names()) os << ' ' << preset;
    throw DataError(os.str());
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(const std::string& value) {
    std::vector<double> nums;
    std::string token;
    std::istringstream ss(value);
    while (std::getline(ss, token, ',')) {
        nums.push_back(std::stod(trim(token)));
    }
    return nums;
}

}  // namespace

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open scenario file: " + path);

    Scenario s;
    s.name = path;
    std::string section;
    AgentSpec* agent = nullptr;
    struct PendingLike {
        std::size_t agent_index;
        int other;
        double cos;
    };
    std::vector<PendingLike> pending_likes;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        auto fail = [&](const std::string& what) -> void {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + what);
        };

        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section == "agent") {
                s.agents.emplace_back();
                agent = &s.agents.back();
                agent->embedding.resize(0);
            } else if (section != "world" && section != "noise") {
                fail("unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (section == "world") {
                if (key == "frames") s.frames = std::stoi(value);
                else if (key == "width") s.frame_width = std::stod(value);
                else if (key == "height") s.frame_height = std::stod(value);
                else if (key == "embedding_dim") s.embedding_dim = std::stoi(value);
                else if (key == "name") s.name = value;
                else fail("unknown world key '" + key + "'");
            } else if (section == "noise") {
                if (key == "box_jitter") s.noise.box_jitter_std = std::stod(value);
                else if (key == "drop_prob") s.noise.drop_prob = std::stod(value);
                else if (key == "fp_rate") s.noise.fp_rate = std::stod(value);
                else if (key == "conf_base") s.noise.conf_base = std::stod(value);
                else if (key == "conf_occl_penalty") s.noise.conf_occl_penalty = std::stod(value);
                else if (key == "conf_noise") s.noise.conf_noise_std = std::stod(value);
                else if (key == "embedding_noise") s.noise.embedding_noise_std = std::stod(value);
                else if (key == "label_blur") s.noise.label_blur = std::stod(value);
                else if (key == "label_flip_prob") s.noise.label_flip_prob = std::stod(value);
                else if (key == "dir_blur") s.noise.dir_blur_sigma = std::stod(value);
                else if (key == "occl_drop_coverage") s.noise.occl_drop_coverage = std::stod(value);
                else if (key == "seed") s.noise.seed = std::stoull(value);
                else if (key == "occluder") {
                    // x,y,w,h @from..to
                    const auto at = value.find('@');
                    if (at == std::string::npos) fail("occluder needs '@from..to'");
                    const auto nums = parse_numbers(trim(value.substr(0, at)));
                    if (nums.size() != 4) fail("occluder needs 4 box numbers");
                    const std::string range = trim(value.substr(at + 1));
                    const auto dots = range.find("..");
                    if (dots == std::string::npos) fail("occluder range needs 'from..to'");
                    Occluder occ;
                    occ.box = BBox{nums[0], nums[1], nums[2], nums[3]};
                    occ.from = std::stoi(range.substr(0, dots));
                    occ.to = std::stoi(range.substr(dots + 2));
                    s.noise.occluders.push_back(occ);
                } else fail("unknown noise key '" + key + "'");
            } else if (section == "agent") {
                if (!agent) fail("key outside any [agent] section");
                if (key == "identity") agent->identity = std::stoi(value);
                else if (key == "class_id") agent->class_id = std::stoi(value);
                else if (key == "spawn") agent->spawn = std::stoi(value);
                else if (key == "despawn") agent->despawn = std::stoi(value);
                else if (key == "size") {
                    const auto nums = parse_numbers(value);
                    if (nums.size() != 2) fail("size needs 'w,h'");
                    agent->w = nums[0];
                    agent->h = nums[1];
                } else if (key == "color") {
                    agent->color_bits.clear();
                    for (const double v : parse_numbers(value)) {
                        agent->color_bits.push_back(static_cast<int>(v));
                    }
                } else if (key == "style") {
                    agent->style_bit = std::stoi(value);
                } else if (key == "waypoint") {
                    // frame:x,y
                    const auto colon = value.find(':');
                    if (colon == std::string::npos) fail("waypoint needs 'frame:x,y'");
                    const int frame = std::stoi(trim(value.substr(0, colon)));
                    const auto nums = parse_numbers(trim(value.substr(colon + 1)));
                    if (nums.size() != 2) fail("waypoint needs two coordinates");
                    agent->waypoints.push_back({frame, nums[0], nums[1]});
                } else if (key == "embedding_like") {
                    // other_identity cos_sim
                    std::istringstream ss(value);
                    PendingLike like{s.agents.size() - 1, 0, 1.0};
                    if (!(ss >> like.other >> like.cos)) fail("embedding_like needs 'id cos'");
                    pending_likes.push_back(like);
                } else fail("unknown agent key '" + key + "'");
            } else {
                fail("key before any section header");
            }
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            fail(std::string("cannot parse value '") + value + "': " + e.what());
        }
    }

    for (auto& a : s.agents) {
        if (a.embedding.size() == 0) a.embedding = identity_embedding(a.identity, s.embedding_dim);
        if (a.despawn < a.spawn) a.despawn = s.frames;
        if (a.waypoints.empty()) {
            throw DataError(path + ": agent " + std::to_string(a.identity) + " has no waypoints");
        }
    }
    for (const auto& like : pending_likes) {
        const AgentSpec* other = nullptr;
        for (const auto& a : s.agents) {
            if (a.identity == like.other) other = &a;
        }
        if (!other) {
            throw DataError(path + ": embedding_like refers to unknown identity " +
                            std::to_string(like.other));
        }
        s.agents[like.agent_index].embedding = embedding_with_similarity(
            other->embedding, like.cos, static_cast<std::uint64_t>(s.agents[like.agent_index].identity));
    }
    if (s.frames <= 0) throw DataError(path + ": [world] frames must be set and positive");
    return s;
}

}  // namespace featuresort
