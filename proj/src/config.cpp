#include "ccn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ccn {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("key '", key, "' expects true/false, got '", v, "'");
}

long parse_int(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const long r = std::stol(v, &pos);
        require(pos == v.size(), "junk");
        return r;
    } catch (const std::exception&) {
        fail("key '", key, "' expects an integer, got '", v, "'");
    }
}

double parse_real(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const double r = std::stod(v, &pos);
        require(pos == v.size(), "junk");
        return r;
    } catch (const std::exception&) {
        fail("key '", key, "' expects a number, got '", v, "'");
    }
}

} // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, "config line ", lineno, " is not key = value: '", line,
                "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!seen.count(key), "duplicate config key '", key, "'");
        seen.insert(key);

        if (key == "dataset") {
            cfg.dataset = value;
        } else if (key == "task") {
            cfg.task = value;
        } else if (key == "order") {
            cfg.order = static_cast<int>(parse_int(value, key));
        } else if (key == "levels") {
            cfg.levels = static_cast<int>(parse_int(value, key));
        } else if (key == "use_adjacency") {
            cfg.use_adjacency = parse_bool(value, key);
        } else if (key == "channel_widths") {
            cfg.channel_widths.clear();
            if (value != "auto")
                for (const auto& item : split_list(value))
                    cfg.channel_widths.push_back(static_cast<int>(parse_int(item, key)));
        } else if (key == "contractions") {
            cfg.contractions = static_cast<int>(parse_int(value, key));
        } else if (key == "lr") {
            cfg.lr = parse_real(value, key);
        } else if (key == "momentum") {
            cfg.momentum = parse_real(value, key);
        } else if (key == "lr_min") {
            cfg.lr_min = parse_real(value, key);
        } else if (key == "lr_decay") {
            cfg.lr_decay = value == "auto" ? -1.0 : parse_real(value, key);
        } else if (key == "epochs") {
            cfg.epochs = static_cast<int>(parse_int(value, key));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
        } else if (key == "split_seeds") {
            cfg.split_seeds.clear();
            for (const auto& item : split_list(value))
                cfg.split_seeds.push_back(static_cast<std::uint64_t>(parse_int(item, key)));
        } else if (key == "hist_depth") {
            cfg.hist_depth = static_cast<int>(parse_int(value, key));
        } else {
            fail("unknown config key '", key, "'");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open config file ", path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    os << "dataset = " << dataset << "\n";
    os << "task = " << task << "\n";
    os << "order = " << order << "\n";
    os << "levels = " << levels << "\n";
    os << "use_adjacency = " << (use_adjacency ? "true" : "false") << "\n";
    os << "channel_widths = ";
    if (channel_widths.empty()) {
        os << "auto";
    } else {
        for (size_t i = 0; i < channel_widths.size(); ++i)
            os << (i ? "," : "") << channel_widths[i];
    }
    os << "\n";
    os << "contractions = " << contractions << "\n";
    os.precision(17);
    os << "lr = " << lr << "\n";
    os << "momentum = " << momentum << "\n";
    os << "lr_min = " << lr_min << "\n";
    if (lr_decay < 0)
        os << "lr_decay = auto\n";
    else
        os << "lr_decay = " << lr_decay << "\n";
    os << "epochs = " << epochs << "\n";
    os << "seed = " << seed << "\n";
    os << "split_seeds = ";
    for (size_t i = 0; i < split_seeds.size(); ++i) os << (i ? "," : "") << split_seeds[i];
    os << "\n";
    os << "hist_depth = " << hist_depth << "\n";
    return os.str();
}

void RunConfig::validate() const {
    require(task == "classification" || task == "regression", "task must be classification or ",
            "regression, got '", task, "'");
    require(order >= 0 && order <= 2, "shipped configurations support orders 0..2, got ", order);
    require(levels >= 1, "levels must be >= 1");
    require(channel_widths.empty() || static_cast<int>(channel_widths.size()) == levels,
            "channel_widths needs one entry per level (", levels, "), got ",
            channel_widths.size());
    for (int w : channel_widths) require(w >= 1, "channel width must be positive");
    require(contractions >= 1, "contractions must be >= 1");
    require(lr > 0 && lr_min >= 0 && lr >= lr_min, "need lr >= lr_min >= 0");
    require(momentum >= 0 && momentum < 1, "momentum must lie in [0,1)");
    require(epochs >= 1, "epochs must be >= 1");
    require(!split_seeds.empty(), "need at least one split seed");
    require(hist_depth >= 1, "hist_depth must be >= 1");
}

std::vector<int> RunConfig::resolved_widths() const {
    if (!channel_widths.empty()) return channel_widths;
    std::vector<int> widths;
    int w = 16;
    for (int l = 0; l < levels; ++l) {
        widths.push_back(w);
        w *= 2;  // doubled at each level
    }
    return widths;
}

real_t RunConfig::resolved_lr_decay(int steps_per_epoch) const {
    if (lr_decay >= 0) return lr_decay;
    const index_t total = static_cast<index_t>(steps_per_epoch) * epochs;
    return total > 0 ? (lr - lr_min) / static_cast<real_t>(total) : 0.0;
}

} // namespace ccn
