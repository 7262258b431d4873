#pragma once

// Instance and solution serialization.
//
// Instance JSON:  {"s": [[x,y],...], "t": [[x,y],...]}
// Solution JSON:  {"pairs": [[si,ti],...], "cost": number, "algo": string}
// Instance text:  first line "|S| |T|", then one "x y" per point, S block
// followed by T block.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geomatch/core.hpp"

namespace geomatch {

struct Solution {
    PairSet pairs;
    double cost = 0.0;
    std::string algo;
    double wall_ms = -1.0;  // < 0 means unreported
};

inline nlohmann::json instance_to_json(const ManyToManyInstance& inst) {
    nlohmann::json j;
    j["s"] = nlohmann::json::array();
    j["t"] = nlohmann::json::array();
    for (const Point& p : inst.s) j["s"].push_back({p.x, p.y});
    for (const Point& p : inst.t) j["t"].push_back({p.x, p.y});
    return j;
}

inline ManyToManyInstance instance_from_json(const nlohmann::json& j) {
    ManyToManyInstance inst;
    for (const auto& e : j.at("s")) inst.s.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    for (const auto& e : j.at("t")) inst.t.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
    validate_instance(inst);
    return inst;
}

inline std::string instance_to_text(const ManyToManyInstance& inst) {
    std::string out = std::to_string(inst.ns()) + " " + std::to_string(inst.nt()) + "\n";
    char buf[80];
    auto emit = [&](const Point& p) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x, p.y);
        out += buf;
    };
    for (const Point& p : inst.s) emit(p);
    for (const Point& p : inst.t) emit(p);
    return out;
}

inline ManyToManyInstance instance_from_text(const std::string& text) {
    std::istringstream in(text);
    int ns = 0, nt = 0;
    if (!(in >> ns >> nt)) throw std::invalid_argument("instance text: bad header");
    if (ns < 1 || nt < 1) throw std::invalid_argument("instance text: sizes must be positive");
    ManyToManyInstance inst;
    for (int i = 0; i < ns + nt; ++i) {
        Point p;
        if (!(in >> p.x >> p.y)) throw std::invalid_argument("instance text: missing point");
        (i < ns ? inst.s : inst.t).push_back(p);
    }
    validate_instance(inst);
    return inst;
}

/// Accepts either format: JSON if the first non-space byte is '{'.
inline ManyToManyInstance parse_instance(const std::string& content) {
    std::size_t i = content.find_first_not_of(" \t\r\n");
    if (i != std::string::npos && content[i] == '{')
        return instance_from_json(nlohmann::json::parse(content));
    return instance_from_text(content);
}

inline nlohmann::json solution_to_json(const Solution& sol) {
    nlohmann::json j;
    j["pairs"] = nlohmann::json::array();
    for (const auto& [si, ti] : sol.pairs) j["pairs"].push_back({si, ti});
    j["cost"] = sol.cost;
    j["algo"] = sol.algo;
    if (sol.wall_ms >= 0.0) j["wall_ms"] = sol.wall_ms;
    return j;
}

inline Solution solution_from_json(const nlohmann::json& j) {
    Solution sol;
    for (const auto& e : j.at("pairs")) sol.pairs.insert(e.at(0).get<int>(), e.at(1).get<int>());
    sol.cost = j.at("cost").get<double>();
    sol.algo = j.at("algo").get<std::string>();
    if (j.contains("wall_ms")) sol.wall_ms = j["wall_ms"].get<double>();
    return sol;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace geomatch
