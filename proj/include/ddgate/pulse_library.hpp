#pragma once

// Named pulse shapes stored as JSON:
//   { "shapes": { "pi_x_o2": { "axis": "x", "angle": 3.14159..., "kind": "shaped",
//                              "order": 2, "coefficients": [...] }, ... } }

#include "ddgate/pulse_shapes.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace ddgate {

struct LibraryEntry {
    PulseShape shape;
    int order = 0;  // self-refocusing order; 0 for gaussian
};

class PulseLibrary {
public:
    void put(const std::string& name, const PulseShape& shape, int order) {
        entries_[name] = {shape, order};
    }

    bool contains(const std::string& name) const { return entries_.count(name) > 0; }

    const LibraryEntry& at(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw std::out_of_range("pulse library has no shape '" + name + "'");
        return it->second;
    }

    const std::map<std::string, LibraryEntry>& entries() const { return entries_; }

    nlohmann::json to_json() const {
        nlohmann::json shapes = nlohmann::json::object();
        for (const auto& [name, e] : entries_) {
            shapes[name] = {{"axis", std::string(1, axis_name(e.shape.axis))},
                            {"angle", e.shape.angle},
                            {"duration", e.shape.duration},
                            {"kind", kind_name(e.shape.kind)},
                            {"order", e.order},
                            {"coefficients", e.shape.coefficients}};
        }
        return {{"shapes", shapes}};
    }

    static PulseLibrary from_json(const nlohmann::json& j) {
        PulseLibrary lib;
        for (const auto& [name, v] : j.at("shapes").items()) {
            const std::string axis = v.at("axis").get<std::string>();
            if (axis.size() != 1) throw std::invalid_argument("bad axis for shape " + name);
            PulseShape s;
            s.axis = parse_axis(axis[0]);
            s.angle = v.at("angle").get<double>();
            s.duration = v.value("duration", 1.0);
            s.kind = parse_kind(v.at("kind").get<std::string>());
            s.coefficients = v.value("coefficients", std::vector<double>{});
            if (s.kind == PulseKind::shaped) s = make_shaped(s.angle, s.axis, s.coefficients, s.duration);
            lib.put(name, s, v.value("order", 0));
        }
        return lib;
    }

    static PulseLibrary load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open pulse library " + path);
        return from_json(nlohmann::json::parse(in));
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write pulse library " + path);
        out << to_json().dump(2) << '\n';
    }

private:
    std::map<std::string, LibraryEntry> entries_;
};

inline std::string angle_tag(double angle) {
    const double r = std::abs(angle) / pi;
    std::string tag = std::abs(r - 1.0) < 1e-12 ? "pi" : std::abs(r - 0.5) < 1e-12 ? "pi2" : std::to_string(r) + "pi";
    return angle < 0 ? "m" + tag : tag;
}

/// Library key, e.g. "pi2_y_o2", "pi_x_gaussian", "pi_x_hard".
inline std::string shape_key(double angle, Axis axis, PulseKind kind, int order) {
    std::string k = angle_tag(angle) + "_" + axis_name(axis) + "_";
    switch (kind) {
    case PulseKind::shaped: return k + "o" + std::to_string(order);
    case PulseKind::gaussian: return k + "gaussian";
    case PulseKind::hard: return k + "hard";
    }
    return k;
}

/// Optimizes the shipped default set: {pi_x, pi/2_x, pi/2_y} at orders 1 and 2,
/// plus gaussian and hard variants.
inline PulseLibrary default_library(const OptimizerOptions& opt = {}) {
    PulseLibrary lib;
    struct Target { double angle; Axis axis; };
    const Target targets[] = {{pi, Axis::x}, {pi / 2, Axis::x}, {pi / 2, Axis::y}};
    for (const auto& t : targets) {
        for (int order : {1, 2})
            lib.put(shape_key(t.angle, t.axis, PulseKind::shaped, order),
                    optimize_shape(t.angle, t.axis, order, default_harmonics(order), opt), order);
        lib.put(shape_key(t.angle, t.axis, PulseKind::gaussian, 0), make_gaussian(t.angle, t.axis), 0);
        lib.put(shape_key(t.angle, t.axis, PulseKind::hard, 0), make_hard(t.angle, t.axis), 0);
    }
    return lib;
}

} // namespace ddgate
