#ifndef TSPLAB_IO_HPP
#define TSPLAB_IO_HPP

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tsplab/instance.hpp"

namespace tsplab {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

/// Doubles travel as C99 hex-float strings so round-trips are bit-exact.
inline std::string hex_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

inline double parse_hex_double(const std::string& s, int line) {
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0') throw ParseError(line, "bad float '" + s + "'");
    return v;
}

inline void save_instance(const Instance& inst, std::ostream& os) {
    nlohmann::json hdr;
    hdr["d"] = inst.box.d;
    hdr["t"] = hex_double(inst.box.t);
    hdr["topology"] = inst.box.topology == Topology::torus ? "torus" : "cube";
    hdr["precision_bits"] = inst.precision_bits;
    if (inst.seed)
        hdr["seed"] = *inst.seed;
    else
        hdr["seed"] = nullptr;
    hdr["n"] = inst.size();
    hdr["plants"] = nlohmann::json::array();
    for (const PlantRecord& rec : inst.plants) {
        nlohmann::json j;
        j["kind"] = rec.kind;
        nlohmann::json c = nlohmann::json::array();
        for (double x : rec.center) c.push_back(hex_double(x));
        j["center"] = c;
        j["clearance"] = hex_double(rec.clearance);
        nlohmann::json mem = nlohmann::json::array();
        for (int idx : rec.members) mem.push_back(idx + 1);  // file indices are 1-based
        j["members"] = mem;
        nlohmann::json pj;
        for (const auto& [k, v] : rec.params) pj[k] = hex_double(v);
        j["params"] = pj;
        hdr["plants"].push_back(j);
    }
    os << "TSPLAB v1 " << hdr.dump() << "\n";
    for (int i = 0; i < inst.size(); ++i) {
        os << (i + 1);
        for (double x : inst.points[i]) os << ' ' << hex_double(x);
        os << '\n';
    }
}

inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    save_instance(inst, f);
}

inline Instance load_instance(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError(1, "empty file");
    const std::string magic = "TSPLAB v1 ";
    if (line.rfind(magic, 0) != 0) throw ParseError(1, "missing TSPLAB v1 header");
    nlohmann::json hdr;
    try {
        hdr = nlohmann::json::parse(line.substr(magic.size()));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("bad header json: ") + e.what());
    }

    Instance inst;
    try {
        inst.box = Box(hdr.at("d").get<int>(),
                       parse_hex_double(hdr.at("t").get<std::string>(), 1),
                       hdr.at("topology").get<std::string>() == "cube" ? Topology::cube
                                                                       : Topology::torus);
        inst.precision_bits = hdr.at("precision_bits").get<int>();
        if (!hdr.at("seed").is_null()) inst.seed = hdr.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, std::string("bad header field: ") + e.what());
    }
    const int n = hdr.at("n").get<int>();

    inst.points.assign(n, Point(inst.box.d, 0.0));
    std::vector<char> seen(n, 0);
    for (int row = 0; row < n; ++row) {
        const int lineno = row + 2;
        if (!std::getline(is, line)) throw ParseError(lineno, "unexpected end of file");
        std::istringstream ss(line);
        long idx;
        if (!(ss >> idx) || idx < 1 || idx > n) throw ParseError(lineno, "bad point index");
        if (seen[idx - 1]) throw ParseError(lineno, "duplicate point index");
        seen[idx - 1] = 1;
        Point p(inst.box.d);
        for (int k = 0; k < inst.box.d; ++k) {
            std::string tok;
            if (!(ss >> tok)) throw ParseError(lineno, "missing coordinate");
            p[k] = parse_hex_double(tok, lineno);
        }
        std::string trailing;
        if (ss >> trailing) throw ParseError(lineno, "trailing tokens");
        inst.points[idx - 1] = std::move(p);
    }

    for (const auto& j : hdr.at("plants")) {
        PlantRecord rec;
        rec.kind = j.at("kind").get<std::string>();
        for (const auto& c : j.at("center")) rec.center.push_back(parse_hex_double(c, 1));
        rec.clearance = parse_hex_double(j.at("clearance").get<std::string>(), 1);
        for (const auto& mval : j.at("members")) {
            int m = mval.get<int>();
            if (m < 1 || m > n) throw ParseError(1, "plant member out of range");
            rec.members.push_back(m - 1);
        }
        for (const auto& [k, v] : j.at("params").items())
            rec.params[k] = parse_hex_double(v.get<std::string>(), 1);
        inst.plants.push_back(std::move(rec));
    }
    return inst;
}

inline Instance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return load_instance(f);
}

}  // namespace tsplab

#endif
