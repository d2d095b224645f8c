#include "qplate/errors.hpp"
#include "qplate/scan.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qplate {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) {
    const YAML::Mark mark = node.Mark();
    const bool has_mark = mark.line >= 0 && !node.IsNull();
    throw ValidationError(what, field, has_mark ? mark.line + 1 : 0, has_mark ? mark.column + 1 : 0);
}

void check_map(const YAML::Node& node, const std::string& field) {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
}

void check_keys(const YAML::Node& node, const std::string& field, const std::set<std::string>& allowed) {
    check_map(node, field);
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) fail(kv.first, field.empty() ? key : field + "." + key, "unknown key");
    }
}

double get_double(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    try {
        const double v = node.as<double>();
        if (!std::isfinite(v)) fail(node, field, "must be finite");
        return v;
    } catch (const YAML::BadConversion&) {
        fail(node, field, "expected a number, got '" + node.Scalar() + "'");
    }
}

int get_int(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(node, field, "expected an integer");
    try {
        return node.as<int>();
    } catch (const YAML::BadConversion&) {
        fail(node, field, "expected an integer, got '" + node.Scalar() + "'");
    }
}

bool get_bool(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(node, field, "expected true or false");
    try {
        return node.as<bool>();
    } catch (const YAML::BadConversion&) {
        fail(node, field, "expected true or false, got '" + node.Scalar() + "'");
    }
}

std::string get_string(const YAML::Node& node, const std::string& field) {
    if (!node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
}

const YAML::Node require(const YAML::Node& parent, const char* key, const std::string& field) {
    const YAML::Node node = parent[key];
    if (!node) fail(parent, field, std::string("missing required key '") + key + "'");
    return node;
}

double positive(const YAML::Node& node, const std::string& field) {
    const double v = get_double(node, field);
    if (!(v > 0.0)) fail(node, field, "must be positive");
    return v;
}

MediumModel parse_medium(const YAML::Node& node, const std::string& field, double omega0,
                         const std::filesystem::path& base_dir) {
    check_keys(node, field, {"type", "omega0", "omega1", "damping", "beta", "gamma", "file", "lossless"});
    const std::string type = get_string(require(node, "type", field), field + ".type");
    auto only = [&](const std::set<std::string>& keys) {
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (key != "type" && key != "lossless" && !keys.count(key))
                fail(kv.first, field + "." + key, "not valid for medium type '" + type + "'");
        }
    };
    MediumModel model;
    if (type == "vacuum") {
        only({});
    } else if (type == "single_resonance") {
        only({"omega0", "omega1", "damping"});
        const double w0 = positive(require(node, "omega0", field), field + ".omega0");
        const double w1 = get_double(require(node, "omega1", field), field + ".omega1");
        if (w1 < 0.0) fail(node["omega1"], field + ".omega1", "must be non-negative");
        const double damping = positive(require(node, "damping", field), field + ".damping");
        model = MediumModel::single_resonance(w0 * omega0, w1 * omega0, damping * omega0);
    } else if (type == "constant") {
        only({"beta", "gamma"});
        const double beta = positive(require(node, "beta", field), field + ".beta");
        const double gamma = node["gamma"] ? get_double(node["gamma"], field + ".gamma") : 0.0;
        if (gamma < 0.0) fail(node["gamma"], field + ".gamma", "must be non-negative");
        model = MediumModel::constant(beta, gamma);
    } else if (type == "tabulated") {
        only({"file"});
        std::filesystem::path file = get_string(require(node, "file", field), field + ".file");
        if (file.is_relative()) file = base_dir / file;
        std::ifstream in(file);
        if (!in) fail(node["file"], field + ".file", "cannot open '" + file.string() + "'");
        try {
            model = load_tabulated(in);
        } catch (const ParseError& err) {
            fail(node["file"], field + ".file", file.string() + ": " + err.what());
        }
    } else {
        fail(node["type"], field + ".type", "unknown medium type '" + type + "'");
    }
    if (node["lossless"] && get_bool(node["lossless"], field + ".lossless")) model = model.lossless();
    return model;
}

GridSpec parse_grid(const YAML::Node& node, const std::string& field) {
    check_keys(node, field, {"min", "max", "count"});
    GridSpec g;
    g.min = get_double(require(node, "min", field), field + ".min");
    g.max = get_double(require(node, "max", field), field + ".max");
    g.count = get_int(require(node, "count", field), field + ".count");
    if (!(g.min > 0.0)) fail(node["min"], field + ".min", "must be positive");
    if (!(g.min < g.max)) fail(node["max"], field, "min must be less than max");
    if (g.count < 2) fail(node["count"], field + ".count", "must be at least 2");
    return g;
}

}  // namespace

ScanConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& err) {
        throw ValidationError(err.msg, "", err.mark.line + 1, err.mark.column + 1);
    }
    if (!root || root.IsNull()) throw ValidationError("empty configuration", "");
    check_keys(root, "", {"omega0", "media", "stack", "frequency", "thickness", "scenario", "temperature", "output"});

    ScanConfig cfg;
    if (root["omega0"]) cfg.omega0 = positive(root["omega0"], "omega0");

    std::map<std::string, MediumModel> media{{"vacuum", MediumModel::vacuum()}};
    if (const auto node = root["media"]) {
        check_map(node, "media");
        for (const auto& kv : node) {
            const auto name = kv.first.as<std::string>();
            if (name == "vacuum") fail(kv.first, "media.vacuum", "'vacuum' is predefined");
            media[name] = parse_medium(kv.second, "media." + name, cfg.omega0, base_dir);
        }
    }
    auto medium_ref = [&](const YAML::Node& node, const std::string& field) {
        if (node.IsMap()) return parse_medium(node, field, cfg.omega0, base_dir);
        const std::string name = get_string(node, field);
        auto it = media.find(name);
        if (it == media.end()) fail(node, field, "unknown medium '" + name + "'");
        return it->second;
    };

    const YAML::Node stack = require(root, "stack", "stack");
    check_keys(stack, "stack", {"left", "right", "layers"});
    cfg.left = stack["left"] ? medium_ref(stack["left"], "stack.left") : MediumModel::vacuum();
    cfg.right = stack["right"] ? medium_ref(stack["right"], "stack.right") : MediumModel::vacuum();
    const YAML::Node layers = require(stack, "layers", "stack");
    if (!layers.IsSequence() || layers.size() == 0) fail(layers, "stack.layers", "expected a non-empty list");
    for (std::size_t j = 0; j < layers.size(); ++j) {
        const std::string field = "stack.layers[" + std::to_string(j) + "]";
        const YAML::Node layer = layers[j];
        check_keys(layer, field, {"medium", "thickness", "sweep"});
        const bool sweep = layer["sweep"] && get_bool(layer["sweep"], field + ".sweep");
        double thickness = 0.0;
        if (layer["thickness"]) {
            thickness = get_double(layer["thickness"], field + ".thickness");
            if (!(thickness > 0.0)) fail(layer["thickness"], field + ".thickness", "must be positive");
        } else if (!sweep) {
            fail(layer, field, "missing required key 'thickness'");
        }
        if (sweep) {
            if (cfg.swept_layer >= 0) fail(layer["sweep"], field + ".sweep", "only one layer may be swept");
            cfg.swept_layer = static_cast<int>(j);
        }
        cfg.layers.push_back({medium_ref(require(layer, "medium", field), field + ".medium"), thickness});
    }

    cfg.frequency = parse_grid(require(root, "frequency", "frequency"), "frequency");
    if (root["thickness"]) {
        if (cfg.swept_layer < 0) fail(root["thickness"], "thickness", "grid given but no layer has sweep: true");
        cfg.thickness = parse_grid(root["thickness"], "thickness");
    } else if (cfg.swept_layer >= 0) {
        fail(root, "thickness", "a swept layer needs a thickness grid");
    }

    if (const auto node = root["scenario"]) {
        const std::string s = get_string(node, "scenario");
        if (s == "one_side") cfg.scenario = Scenario::OneSide;
        else if (s == "thermal_plate") cfg.scenario = Scenario::ThermalPlate;
        else if (s == "blackbody") cfg.scenario = Scenario::Blackbody;
        else if (s == "identities") cfg.scenario = Scenario::Identities;
        else fail(node, "scenario", "unknown scenario '" + s + "'");
    }
    if (const auto node = root["temperature"]) {
        cfg.temperature = get_double(node, "temperature");
        if (cfg.temperature < 0.0) fail(node, "temperature", "must be non-negative");
    }
    if (const auto node = root["output"]) cfg.output = get_string(node, "output");

    // Tabulated media must cover the whole frequency grid.
    auto covers = [&](const MediumModel& m, const std::string& what) {
        const double lo = cfg.frequency.min * cfg.omega0, hi = cfg.frequency.max * cfg.omega0;
        if (lo < m.omega_min() || hi > m.omega_max())
            fail(root["frequency"], "frequency", what + ": tabulated data do not cover the frequency grid");
    };
    covers(cfg.left, "stack.left");
    covers(cfg.right, "stack.right");
    for (std::size_t j = 0; j < cfg.layers.size(); ++j)
        covers(cfg.layers[j].medium, "stack.layers[" + std::to_string(j) + "]");
    return cfg;
}

ScanConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

}  // namespace qplate
