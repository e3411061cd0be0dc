#pragma once

// Combinatorial closed triangulated surfaces and 3-manifolds.
//
// Simplices are stored as sorted vertex tuples. Construction never rejects a
// structurally broken complex; validate() reports every violated invariant so
// callers (the CLI, tests) can decide what to do with it. All other functions
// assume a valid complex.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "packflow/error.hpp"

namespace packflow {

using Edge = std::array<int, 2>;
using Triangle = std::array<int, 3>;
using Tetrahedron = std::array<int, 4>;

inline constexpr int kDefaultEnumerationCap = 22;

template <std::size_t K>
std::array<int, K> canonical(std::array<int, K> s) {
    std::sort(s.begin(), s.end());
    return s;
}

template <std::size_t K>
std::string simplex_name(const std::array<int, K>& s) {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < K; ++k) os << (k ? "," : "") << s[k];
    os << '}';
    return os.str();
}

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

namespace detail {

inline std::int64_t edge_key(int i, int j) {
    if (i > j) std::swap(i, j);
    return (static_cast<std::int64_t>(i) << 32) | static_cast<std::uint32_t>(j);
}

template <std::size_t K>
bool in_range(const std::array<int, K>& s, int n) {
    return std::all_of(s.begin(), s.end(), [n](int v) { return v >= 0 && v < n; });
}

template <std::size_t K>
bool has_repeat(const std::array<int, K>& s) {
    for (std::size_t a = 0; a + 1 < K; ++a)
        if (s[a] == s[a + 1]) return true;
    return false;
}

template <std::size_t K>
void report_duplicates(const std::vector<std::array<int, K>>& list, const char* kind,
                       ValidationReport& report) {
    std::map<std::array<int, K>, int> seen;
    for (const auto& s : list) ++seen[s];
    for (const auto& [s, n] : seen)
        if (n > 1)
            report.problems.push_back(std::string("duplicate ") + kind + " " + simplex_name(s));
}

}  // namespace detail

/// Weighted closed triangulated surface. Weights are intersection angles in
/// [0, pi/2] attached to edges.
class Surface2Complex {
public:
    Surface2Complex() = default;

    Surface2Complex(int vertex_count, std::vector<Edge> edges, std::vector<double> weights,
                    std::vector<Triangle> faces)
        : n_(vertex_count), edges_(std::move(edges)), weights_(std::move(weights)),
          faces_(std::move(faces)) {
        if (n_ <= 0) throw InvalidInput("vertex_count must be positive");
        if (weights_.size() != edges_.size())
            throw InvalidInput("edge weight list does not match edge list");
        for (auto& e : edges_) e = canonical(e);
        for (auto& f : faces_) f = canonical(f);
        build_index();
    }

    /// Edges inferred from the faces, every weight set to `weight`.
    static Surface2Complex from_faces(int vertex_count, std::vector<Triangle> faces,
                                      double weight = 0.0) {
        std::set<Edge> found;
        for (auto f : faces) {
            f = canonical(f);
            found.insert({f[0], f[1]});
            found.insert({f[0], f[2]});
            found.insert({f[1], f[2]});
        }
        std::vector<Edge> edges(found.begin(), found.end());
        std::vector<double> weights(edges.size(), weight);
        return Surface2Complex(vertex_count, std::move(edges), std::move(weights), std::move(faces));
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int face_count() const { return static_cast<int>(faces_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<Triangle>& faces() const { return faces_; }
    const Edge& edge(int e) const { return edges_[e]; }
    double weight(int e) const { return weights_[e]; }
    const Triangle& face(int f) const { return faces_[f]; }

    /// Index of edge {i,j}, or -1.
    int find_edge(int i, int j) const {
        auto it = edge_index_.find(detail::edge_key(i, j));
        return it == edge_index_.end() ? -1 : it->second;
    }

    /// Edge indices of face f; entry k is the edge opposite face vertex k.
    const std::array<int, 3>& face_edges(int f) const { return face_edges_[f]; }

    const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
    const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }
    const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
    int degree(int v) const { return static_cast<int>(neighbors_[v].size()); }

    /// Returns a copy with every weight replaced.
    Surface2Complex with_uniform_weight(double phi) const {
        return Surface2Complex(n_, edges_, std::vector<double>(edges_.size(), phi), faces_);
    }

    int euler_characteristic() const { return n_ - edge_count() + face_count(); }

    ValidationReport validate() const {
        ValidationReport report;
        for (const auto& e : edges_) {
            if (!detail::in_range(e, n_))
                report.problems.push_back("edge " + simplex_name(e) + " has vertex out of range");
            else if (detail::has_repeat(e))
                report.problems.push_back("edge " + simplex_name(e) + " is degenerate");
        }
        for (const auto& f : faces_) {
            if (!detail::in_range(f, n_))
                report.problems.push_back("face " + simplex_name(f) + " has vertex out of range");
            else if (detail::has_repeat(f))
                report.problems.push_back("face " + simplex_name(f) + " is degenerate");
        }
        detail::report_duplicates(edges_, "edge", report);
        detail::report_duplicates(faces_, "face", report);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            const double w = weights_[e];
            if (!(w >= 0.0 && w <= kHalfPi + 1e-15))
                report.problems.push_back("edge " + simplex_name(edges_[e]) + " weight " +
                                          std::to_string(w) + " outside [0, pi/2]");
        }
        std::vector<int> faces_per_edge(edges_.size(), 0);
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            if (!detail::in_range(faces_[f], n_)) continue;
            for (int k = 0; k < 3; ++k) {
                const int e = face_edges_[f][k];
                if (e < 0) {
                    Edge missing{faces_[f][(k + 1) % 3], faces_[f][(k + 2) % 3]};
                    report.problems.push_back("face " + simplex_name(faces_[f]) + " uses edge " +
                                              simplex_name(canonical(missing)) +
                                              " which is not listed");
                } else {
                    ++faces_per_edge[e];
                }
            }
        }
        for (std::size_t e = 0; e < edges_.size(); ++e)
            if (faces_per_edge[e] != 2)
                report.problems.push_back("edge " + simplex_name(edges_[e]) + " in " +
                                          std::to_string(faces_per_edge[e]) + " faces != 2");
        for (int v = 0; v < n_; ++v)
            if (vertex_faces_[v].empty())
                report.problems.push_back("vertex " + std::to_string(v) + " belongs to no face");
        return report;
    }

    static constexpr double kHalfPi = 1.57079632679489661923;

private:
    void build_index() {
        vertex_edges_.assign(n_, {});
        vertex_faces_.assign(n_, {});
        neighbors_.assign(n_, {});
        for (int e = 0; e < edge_count(); ++e) {
            const auto& ed = edges_[e];
            if (!detail::in_range(ed, n_) || ed[0] == ed[1]) continue;
            edge_index_.emplace(detail::edge_key(ed[0], ed[1]), e);
            vertex_edges_[ed[0]].push_back(e);
            vertex_edges_[ed[1]].push_back(e);
            neighbors_[ed[0]].push_back(ed[1]);
            neighbors_[ed[1]].push_back(ed[0]);
        }
        for (auto& nb : neighbors_) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        face_edges_.assign(faces_.size(), {-1, -1, -1});
        for (int f = 0; f < face_count(); ++f) {
            const auto& t = faces_[f];
            if (!detail::in_range(t, n_)) continue;
            for (int k = 0; k < 3; ++k) {
                face_edges_[f][k] = find_edge(t[(k + 1) % 3], t[(k + 2) % 3]);
                vertex_faces_[t[k]].push_back(f);
            }
        }
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> weights_;
    std::vector<Triangle> faces_;
    std::unordered_map<std::int64_t, int> edge_index_;
    std::vector<std::array<int, 3>> face_edges_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> vertex_faces_;
    std::vector<std::vector<int>> neighbors_;
};

/// Closed triangulated 3-manifold.
class Manifold3Complex {
public:
    Manifold3Complex() = default;

    Manifold3Complex(int vertex_count, std::vector<Edge> edges, std::vector<Triangle> triangles,
                     std::vector<Tetrahedron> tetrahedra)
        : n_(vertex_count), edges_(std::move(edges)), triangles_(std::move(triangles)),
          tets_(std::move(tetrahedra)) {
        if (n_ <= 0) throw InvalidInput("vertex_count must be positive");
        for (auto& e : edges_) e = canonical(e);
        for (auto& t : triangles_) t = canonical(t);
        for (auto& t : tets_) t = canonical(t);
        build_index();
    }

    /// All edges and triangles inferred from the tetrahedra.
    static Manifold3Complex from_tetrahedra(int vertex_count, std::vector<Tetrahedron> tets) {
        std::set<Edge> edges;
        std::set<Triangle> triangles;
        for (auto t : tets) {
            t = canonical(t);
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    edges.insert({t[a], t[b]});
                    for (int c = b + 1; c < 4; ++c) triangles.insert({t[a], t[b], t[c]});
                }
        }
        return Manifold3Complex(vertex_count, {edges.begin(), edges.end()},
                                {triangles.begin(), triangles.end()}, std::move(tets));
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int triangle_count() const { return static_cast<int>(triangles_.size()); }
    int tetrahedron_count() const { return static_cast<int>(tets_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<Tetrahedron>& tetrahedra() const { return tets_; }
    const Tetrahedron& tetrahedron(int t) const { return tets_[t]; }

    const std::vector<int>& vertex_tetrahedra(int v) const { return vertex_tets_[v]; }
    const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }

    /// Largest number of tetrahedra sharing one vertex.
    int max_vertex_degree() const {
        std::size_t d = 0;
        for (const auto& vt : vertex_tets_) d = std::max(d, vt.size());
        return static_cast<int>(d);
    }

    int euler_characteristic() const {
        return n_ - edge_count() + triangle_count() - tetrahedron_count();
    }

    ValidationReport validate() const {
        ValidationReport report;
        auto check_range = [&](const auto& list, const char* kind) {
            for (const auto& s : list) {
                if (!detail::in_range(s, n_))
                    report.problems.push_back(std::string(kind) + " " + simplex_name(s) +
                                              " has vertex out of range");
                else if (detail::has_repeat(s))
                    report.problems.push_back(std::string(kind) + " " + simplex_name(s) +
                                              " is degenerate");
            }
        };
        check_range(edges_, "edge");
        check_range(triangles_, "triangle");
        check_range(tets_, "tetrahedron");
        detail::report_duplicates(edges_, "edge", report);
        detail::report_duplicates(triangles_, "triangle", report);
        detail::report_duplicates(tets_, "tetrahedron", report);

        const std::set<Edge> edge_set(edges_.begin(), edges_.end());
        std::map<Triangle, int> tri_count;
        for (const auto& t : triangles_) tri_count.emplace(t, 0);
        for (const auto& t : triangles_) {
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b)
                    if (!edge_set.count({t[a], t[b]}))
                        report.problems.push_back("triangle " + simplex_name(t) + " uses edge " +
                                                  simplex_name(Edge{t[a], t[b]}) +
                                                  " which is not listed");
        }
        for (const auto& t : tets_) {
            for (int skip = 0; skip < 4; ++skip) {
                Triangle face{};
                int k = 0;
                for (int a = 0; a < 4; ++a)
                    if (a != skip) face[k++] = t[a];
                auto it = tri_count.find(face);
                if (it == tri_count.end())
                    report.problems.push_back("tetrahedron " + simplex_name(t) + " uses triangle " +
                                              simplex_name(face) + " which is not listed");
                else
                    ++it->second;
            }
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    if (!edge_set.count({t[a], t[b]}))
                        report.problems.push_back("tetrahedron " + simplex_name(t) + " uses edge " +
                                                  simplex_name(Edge{t[a], t[b]}) +
                                                  " which is not listed");
        }
        for (const auto& [t, n] : tri_count)
            if (n != 2)
                report.problems.push_back("triangle " + simplex_name(t) + " in " +
                                          std::to_string(n) + " tetrahedra != 2");
        for (int v = 0; v < n_; ++v)
            if (vertex_tets_[v].empty())
                report.problems.push_back("vertex " + std::to_string(v) +
                                          " belongs to no tetrahedron");
        return report;
    }

private:
    void build_index() {
        vertex_tets_.assign(n_, {});
        neighbors_.assign(n_, {});
        for (const auto& e : edges_) {
            if (!detail::in_range(e, n_) || e[0] == e[1]) continue;
            neighbors_[e[0]].push_back(e[1]);
            neighbors_[e[1]].push_back(e[0]);
        }
        for (auto& nb : neighbors_) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        for (int t = 0; t < tetrahedron_count(); ++t) {
            if (!detail::in_range(tets_[t], n_)) continue;
            for (int v : tets_[t]) vertex_tets_[v].push_back(t);
        }
    }

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
    std::vector<Tetrahedron> tets_;
    std::vector<std::vector<int>> vertex_tets_;
    std::vector<std::vector<int>> neighbors_;
};

/// Nonempty proper subset of the vertex set.
class VertexSubset {
public:
    VertexSubset(int vertex_count, std::vector<int> members)
        : n_(vertex_count), members_(std::move(members)), in_(vertex_count > 0 ? vertex_count : 0, 0) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        if (members_.empty()) throw InvalidInput("vertex subset must be nonempty");
        if (static_cast<int>(members_.size()) >= n_)
            throw InvalidInput("vertex subset must be a proper subset");
        for (int v : members_) {
            if (v < 0 || v >= n_) throw InvalidInput("vertex subset member out of range");
            in_[v] = 1;
        }
    }

    static VertexSubset from_mask(int vertex_count, std::uint64_t mask) {
        std::vector<int> members;
        for (int v = 0; v < vertex_count; ++v)
            if (mask >> v & 1u) members.push_back(v);
        return VertexSubset(vertex_count, std::move(members));
    }

    int vertex_count() const { return n_; }
    int size() const { return static_cast<int>(members_.size()); }
    const std::vector<int>& members() const { return members_; }
    bool contains(int v) const { return v >= 0 && v < n_ && in_[v]; }

private:
    int n_;
    std::vector<int> members_;
    std::vector<char> in_;
};

/// An (edge, vertex) pair of Lk(I): the edge avoids I, the vertex is in I, and
/// together they span a face.
struct LinkPair {
    int edge;
    int vertex;
    friend bool operator==(const LinkPair&, const LinkPair&) = default;
};

using LinkSet = std::vector<LinkPair>;

/// Euler characteristic of the full subcomplex spanned by I.
inline int induced_subcomplex_euler(const Surface2Complex& c, const VertexSubset& subset) {
    int edges = 0;
    for (const auto& e : c.edges())
        if (subset.contains(e[0]) && subset.contains(e[1])) ++edges;
    int faces = 0;
    for (const auto& f : c.faces())
        if (subset.contains(f[0]) && subset.contains(f[1]) && subset.contains(f[2])) ++faces;
    return subset.size() - edges + faces;
}

/// Lk(I), sorted by (vertex, edge).
inline LinkSet link_pairs(const Surface2Complex& c, const VertexSubset& subset) {
    LinkSet out;
    for (int f = 0; f < c.face_count(); ++f) {
        const auto& t = c.face(f);
        int inside = 0;
        int k_in = -1;
        for (int k = 0; k < 3; ++k)
            if (subset.contains(t[k])) {
                ++inside;
                k_in = k;
            }
        if (inside == 1) out.push_back({c.face_edges(f)[k_in], t[k_in]});
    }
    std::sort(out.begin(), out.end(), [](const LinkPair& a, const LinkPair& b) {
        return a.vertex != b.vertex ? a.vertex < b.vertex : a.edge < b.edge;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Calls fn(mask) for every nonempty proper vertex subset, in increasing mask
/// order. Throws EnumerationTooLarge when N exceeds the cap.
template <typename Fn>
void for_each_proper_subset(int vertex_count, Fn&& fn, int cap = kDefaultEnumerationCap) {
    if (vertex_count > cap || vertex_count > 62)
        throw EnumerationTooLarge("exhaustive subset enumeration needs N <= " +
                                  std::to_string(std::min(cap, 62)) + ", got " +
                                  std::to_string(vertex_count));
    const std::uint64_t full = (std::uint64_t{1} << vertex_count) - 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) fn(mask);
}

}  // namespace packflow
