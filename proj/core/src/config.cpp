#include <featuresort/config.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include <featuresort/types.hpp>

namespace featuresort {

double TrackerConfig::frame_diagonal() const {
    return std::hypot(frame_width, frame_height);
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DataError("invalid config: " + what);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw DataError("config key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw DataError("config key '" + key + "': cannot parse '" + value + "' as an integer");
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void TrackerConfig::validate() const {
    require(lambda_motion >= 0 && lambda_edge >= 0 && lambda_color >= 0 && lambda_style >= 0,
            "all lambda weights must be >= 0");
    require(iou_min >= 0.0 && iou_min <= 1.0, "tracker.iou_min must be in [0,1]");
    require(dir_max > 0.0, "tracker.dir_max must be > 0");
    require(d_max > 0.0, "tracker.d_max must be > 0");
    require(epsilon > 0.0, "tracker.epsilon must be > 0");
    require(alpha >= 0.0 && alpha <= 1.0, "tracker.alpha must be in [0,1]");
    require(age_max >= 1, "tracker.age_max must be >= 1");
    require(conf_min >= 0.0 && conf_min <= 1.0, "tracker.conf_min must be in [0,1]");
    require(stack_len >= 1, "tracker.stack_len must be >= 1");
    require(sigma_dir > 0.0, "tracker.sigma_dir must be > 0");
    require(n_init >= 1, "tracker.n_init must be >= 1");
    require(embedding_dim >= 1, "tracker.embedding_dim must be >= 1");
    require(k_snap >= 1, "tracker.k_snap must be >= 1");
    require(b_link >= 1, "tracker.b_link must be >= 1");
    require(frame_width > 0 && frame_height > 0, "frame size must be positive");
    if (matching == "cascade") {
        throw DataError("tracker.matching=cascade is reserved but not implemented; use vanilla");
    }
    require(matching == "vanilla", "tracker.matching must be 'vanilla'");
}

void RunConfig::validate() const {
    tracker.validate();
    require(gsp.max_gap >= 1, "gsp.max_gap must be >= 1");
    require(gsp.length_scale > 0.0, "gsp.length_scale must be > 0");
    require(gsp.noise_var > 0.0, "gsp.noise_var must be > 0");
    require(link.temporal_max >= 1, "link.temporal_max must be >= 1");
    require(link.spatial_max > 0.0, "link.spatial_max must be > 0");
    require(link.accept_sim > 0.0 && link.accept_sim <= 1.0, "link.accept_sim must be in (0,1]");
    require(link.bank_cap >= 1, "link.bank_cap must be >= 1");
    require(synth_frames >= 0, "synth.frames must be >= 0");
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    using Setter = std::function<void(RunConfig&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"tracker.lambda_motion", [](RunConfig& c, const std::string& v) { c.tracker.lambda_motion = parse_double("tracker.lambda_motion", v); }},
        {"tracker.lambda_edge", [](RunConfig& c, const std::string& v) { c.tracker.lambda_edge = parse_double("tracker.lambda_edge", v); }},
        {"tracker.lambda_color", [](RunConfig& c, const std::string& v) { c.tracker.lambda_color = parse_double("tracker.lambda_color", v); }},
        {"tracker.lambda_style", [](RunConfig& c, const std::string& v) { c.tracker.lambda_style = parse_double("tracker.lambda_style", v); }},
        {"tracker.iou_min", [](RunConfig& c, const std::string& v) { c.tracker.iou_min = parse_double("tracker.iou_min", v); }},
        {"tracker.dir_max", [](RunConfig& c, const std::string& v) { c.tracker.dir_max = parse_double("tracker.dir_max", v); }},
        {"tracker.d_max", [](RunConfig& c, const std::string& v) { c.tracker.d_max = parse_double("tracker.d_max", v); }},
        {"tracker.epsilon", [](RunConfig& c, const std::string& v) { c.tracker.epsilon = parse_double("tracker.epsilon", v); }},
        {"tracker.alpha", [](RunConfig& c, const std::string& v) { c.tracker.alpha = parse_double("tracker.alpha", v); }},
        {"tracker.age_max", [](RunConfig& c, const std::string& v) { c.tracker.age_max = static_cast<int>(parse_int("tracker.age_max", v)); }},
        {"tracker.conf_min", [](RunConfig& c, const std::string& v) { c.tracker.conf_min = parse_double("tracker.conf_min", v); }},
        {"tracker.stack_len", [](RunConfig& c, const std::string& v) { c.tracker.stack_len = static_cast<int>(parse_int("tracker.stack_len", v)); }},
        {"tracker.sigma_dir", [](RunConfig& c, const std::string& v) { c.tracker.sigma_dir = parse_double("tracker.sigma_dir", v); }},
        {"tracker.n_init", [](RunConfig& c, const std::string& v) { c.tracker.n_init = static_cast<int>(parse_int("tracker.n_init", v)); }},
        {"tracker.embedding_dim", [](RunConfig& c, const std::string& v) { c.tracker.embedding_dim = static_cast<int>(parse_int("tracker.embedding_dim", v)); }},
        {"tracker.k_snap", [](RunConfig& c, const std::string& v) { c.tracker.k_snap = static_cast<int>(parse_int("tracker.k_snap", v)); }},
        {"tracker.b_link", [](RunConfig& c, const std::string& v) { c.tracker.b_link = static_cast<int>(parse_int("tracker.b_link", v)); }},
        {"tracker.frame_width", [](RunConfig& c, const std::string& v) { c.tracker.frame_width = parse_double("tracker.frame_width", v); }},
        {"tracker.frame_height", [](RunConfig& c, const std::string& v) { c.tracker.frame_height = parse_double("tracker.frame_height", v); }},
        {"tracker.matching", [](RunConfig& c, const std::string& v) { c.tracker.matching = v; }},
        {"gsp.max_gap", [](RunConfig& c, const std::string& v) { c.gsp.max_gap = static_cast<int>(parse_int("gsp.max_gap", v)); }},
        {"gsp.length_scale", [](RunConfig& c, const std::string& v) { c.gsp.length_scale = parse_double("gsp.length_scale", v); }},
        {"gsp.noise_var", [](RunConfig& c, const std::string& v) { c.gsp.noise_var = parse_double("gsp.noise_var", v); }},
        {"link.temporal_max", [](RunConfig& c, const std::string& v) { c.link.temporal_max = static_cast<int>(parse_int("link.temporal_max", v)); }},
        {"link.spatial_max", [](RunConfig& c, const std::string& v) { c.link.spatial_max = parse_double("link.spatial_max", v); }},
        {"link.accept_sim", [](RunConfig& c, const std::string& v) { c.link.accept_sim = parse_double("link.accept_sim", v); }},
        {"link.bank_cap", [](RunConfig& c, const std::string& v) { c.link.bank_cap = static_cast<int>(parse_int("link.bank_cap", v)); }},
        {"synth.seed", [](RunConfig& c, const std::string& v) { c.synth_seed = static_cast<unsigned long long>(parse_int("synth.seed", v)); }},
        {"synth.frames", [](RunConfig& c, const std::string& v) { c.synth_frames = static_cast<int>(parse_int("synth.frames", v)); }},
    };

    const auto it = setters.find(key);
    if (it == setters.end()) {
        throw DataError("unknown config key '" + key + "'");
    }
    it->second(cfg, value);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            apply_config_entry(cfg, key, value);
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

}  // namespace featuresort
