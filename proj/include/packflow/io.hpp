#pragma once

// JSON mesh/metric files and locale-free number formatting.

#include <json.hpp>

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "packflow/error.hpp"
#include "packflow/mesh.hpp"
#include "packflow/meshes.hpp"
#include "packflow/packing2d.hpp"

namespace packflow::io {

using json = nlohmann::json;
using AnyComplex = std::variant<Surface2Complex, Manifold3Complex>;

/// Shortest form with 17 significant digits, '.' separator, no locale.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    if (ec != std::errc()) return "nan";
    return std::string(buf, end);
}

/// Finite doubles as JSON numbers, non-finite ones as null.
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
    return a;
}

inline json matrix_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
    return a;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput("malformed JSON in " + what + ": " + e.what());
    }
}

/// Comma-separated reals, e.g. "1,6,6,6".
inline std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        std::string item = text.substr(pos, next - pos);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        double v = 0.0;
        auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || end != item.data() + item.size())
            throw InvalidInput("cannot parse number '" + item + "' in list '" + text + "'");
        out.push_back(v);
        pos = next + 1;
    }
    return out;
}

namespace detail {

template <std::size_t K>
std::vector<std::array<int, K>> read_simplices(const json& j, const char* key) {
    std::vector<std::array<int, K>> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw InvalidInput(std::string("'") + key + "' must be an array");
    for (const auto& s : j[key]) {
        if (!s.is_array() || s.size() != K)
            throw InvalidInput(std::string("every entry of '") + key + "' needs " +
                               std::to_string(K) + " vertex indices");
        std::array<int, K> a{};
        for (std::size_t k = 0; k < K; ++k) {
            if (!s[k].is_number_integer()) throw InvalidInput(std::string("non-integer index in '") + key + "'");
            a[k] = s[k].get<int>();
        }
        out.push_back(a);
    }
    return out;
}

}  // namespace detail

/// Mesh JSON: {dim, vertex_count, edges [[i,j,phi?]...], faces, tetrahedra}.
/// Edges may be omitted; they are then inferred with Phi = 0.
inline AnyComplex mesh_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("mesh JSON must be an object");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw InvalidInput("mesh JSON needs an integer 'dim'");
    if (!j.contains("vertex_count") || !j["vertex_count"].is_number_integer())
        throw InvalidInput("mesh JSON needs an integer 'vertex_count'");
    const int dim = j["dim"].get<int>();
    const int n = j["vertex_count"].get<int>();
    if (n <= 0) throw InvalidInput("vertex_count must be positive");

    std::vector<Edge> edges;
    std::vector<double> weights;
    const bool has_edges = j.contains("edges");
    if (has_edges) {
        if (!j["edges"].is_array()) throw InvalidInput("'edges' must be an array");
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || (e.size() != 2 && e.size() != 3))
                throw InvalidInput("every edge needs [i, j] or [i, j, phi]");
            if (!e[0].is_number_integer() || !e[1].is_number_integer())
                throw InvalidInput("non-integer index in 'edges'");
            edges.push_back({e[0].get<int>(), e[1].get<int>()});
            if (e.size() == 3 && !e[2].is_number()) throw InvalidInput("edge weight must be a number");
            weights.push_back(e.size() == 3 ? e[2].get<double>() : 0.0);
        }
    }

    if (dim == 2) {
        auto faces = detail::read_simplices<3>(j, "faces");
        if (!has_edges) return Surface2Complex::from_faces(n, std::move(faces));
        return Surface2Complex(n, std::move(edges), std::move(weights), std::move(faces));
    }
    if (dim == 3) {
        auto tets = detail::read_simplices<4>(j, "tetrahedra");
        if (!has_edges && !j.contains("faces")) return Manifold3Complex::from_tetrahedra(n, std::move(tets));
        Manifold3Complex inferred = Manifold3Complex::from_tetrahedra(n, tets);
        std::vector<Triangle> tris = j.contains("faces") ? detail::read_simplices<3>(j, "faces")
                                                          : inferred.triangles();
        if (!has_edges) edges = inferred.edges();
        return Manifold3Complex(n, std::move(edges), std::move(tris), std::move(tets));
    }
    throw InvalidInput("dim must be 2 or 3");
}

/// Reads a mesh file, or a built-in complex given as "builtin:NAME".
inline AnyComplex load_mesh(const std::string& path) {
    const std::string prefix = "builtin:";
    if (path.rfind(prefix, 0) == 0) {
        const std::string name = path.substr(prefix.size());
        if (meshes::is_manifold_name(name)) return meshes::manifold(name);
        return meshes::surface(name);
    }
    return mesh_from_json(parse_json(read_file(path), path));
}

inline json mesh_to_json(const Surface2Complex& c) {
    json j;
    j["dim"] = 2;
    j["vertex_count"] = c.vertex_count();
    j["edges"] = json::array();
    for (int e = 0; e < c.edge_count(); ++e) {
        json a = {c.edge(e)[0], c.edge(e)[1]};
        if (c.weight(e) != 0.0) a.push_back(c.weight(e));
        j["edges"].push_back(a);
    }
    j["faces"] = json::array();
    for (const auto& f : c.faces()) j["faces"].push_back(f);
    return j;
}

inline json mesh_to_json(const Manifold3Complex& c) {
    json j;
    j["dim"] = 3;
    j["vertex_count"] = c.vertex_count();
    j["edges"] = json::array();
    for (const auto& e : c.edges()) j["edges"].push_back(e);
    j["faces"] = json::array();
    for (const auto& f : c.triangles()) j["faces"].push_back(f);
    j["tetrahedra"] = json::array();
    for (const auto& t : c.tetrahedra()) j["tetrahedra"].push_back(t);
    return j;
}

/// Metric JSON: {"radii": [...]}.
inline PackingMetric metric_from_json(const json& j) {
    if (!j.is_object() || !j.contains("radii") || !j["radii"].is_array())
        throw InvalidInput("metric JSON needs a 'radii' array");
    std::vector<double> r;
    for (const auto& x : j["radii"]) {
        if (!x.is_number()) throw InvalidInput("radii must be numbers");
        r.push_back(x.get<double>());
    }
    return PackingMetric(r);
}

inline PackingMetric load_metric(const std::string& path) {
    return metric_from_json(parse_json(read_file(path), path));
}

inline json metric_to_json(const PackingMetric& r) { return json{{"radii", vector_json(r.radii())}}; }

/// One CSV row of formatted numbers.
inline std::string csv_row(const std::vector<double>& values) {
    std::string line;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) line += ',';
        line += format_double(values[k]);
    }
    return line;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

}  // namespace packflow::io
