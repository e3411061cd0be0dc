#pragma once

// Built-in example complexes. The same complexes are shipped as JSON under
// data/meshes/ (tests check the two agree).

#include <string>
#include <vector>

#include "packflow/error.hpp"
#include "packflow/mesh.hpp"

namespace packflow::meshes {

/// Boundary of the 3-simplex, Phi = 0.
inline Surface2Complex tetrahedron() {
    return Surface2Complex::from_faces(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

/// Antipodal pairs are (0,1), (2,3), (4,5).
inline Surface2Complex octahedron() {
    std::vector<Triangle> faces;
    for (int a : {0, 1})
        for (int b : {2, 3})
            for (int c : {4, 5}) faces.push_back({a, b, c});
    return Surface2Complex::from_faces(6, std::move(faces));
}

/// Vertex 0 on top, rings 1..5 and 6..10, vertex 11 at the bottom.
inline Surface2Complex icosahedron() {
    std::vector<Triangle> faces;
    for (int k = 0; k < 5; ++k) {
        const int u0 = 1 + k, u1 = 1 + (k + 1) % 5;
        const int w0 = 6 + k, w1 = 6 + (k + 1) % 5;
        faces.push_back({0, u0, u1});
        faces.push_back({u0, u1, w0});
        faces.push_back({w0, w1, u1});
        faces.push_back({11, w0, w1});
    }
    return Surface2Complex::from_faces(12, std::move(faces));
}

/// n x n periodic grid, each square split along the same diagonal. Every
/// vertex has degree 6, so r = 1 is flat.
inline Surface2Complex flat_torus(int n = 4) {
    if (n < 3) throw InvalidInput("flat torus needs n >= 3");
    auto v = [n](int i, int j) { return ((i % n + n) % n) * n + (j % n + n) % n; };
    std::vector<Triangle> faces;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            faces.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
            faces.push_back({v(i, j), v(i, j + 1), v(i + 1, j + 1)});
        }
    return Surface2Complex::from_faces(n * n, std::move(faces));
}

/// Genus-2 surface with 11 vertices, every vertex degree >= 7, so r = 1 has
/// K_i = 2pi - deg*pi/3 < 0 everywhere.
inline Surface2Complex genus2() {
    return Surface2Complex::from_faces(
        11, {{0, 4, 5}, {0, 4, 6}, {0, 5, 9}, {0, 6, 7},  {0, 7, 10}, {0, 8, 9},  {0, 8, 10},
             {1, 2, 6}, {1, 2, 8}, {1, 5, 6}, {1, 5, 9},  {1, 7, 8},  {1, 7, 10}, {1, 9, 10},
             {2, 3, 5}, {2, 3, 7}, {2, 4, 5}, {2, 4, 8},  {2, 6, 7},  {3, 4, 6},  {3, 4, 10},
             {3, 5, 6}, {3, 7, 9}, {3, 9, 10}, {4, 8, 10}, {7, 8, 9}});
}

/// Boundary of the 4-simplex.
inline Manifold3Complex five_cell() {
    std::vector<Tetrahedron> tets;
    for (int skip = 0; skip < 5; ++skip) {
        Tetrahedron t{};
        int k = 0;
        for (int v = 0; v < 5; ++v)
            if (v != skip) t[k++] = v;
        tets.push_back(t);
    }
    return Manifold3Complex::from_tetrahedra(5, std::move(tets));
}

/// Boundary of the cross-polytope; vertices 2k and 2k+1 are +e_k and -e_k.
inline Manifold3Complex sixteen_cell() {
    std::vector<Tetrahedron> tets;
    for (int bits = 0; bits < 16; ++bits)
        tets.push_back({0 + (bits & 1), 2 + (bits >> 1 & 1), 4 + (bits >> 2 & 1),
                        6 + (bits >> 3 & 1)});
    return Manifold3Complex::from_tetrahedra(8, std::move(tets));
}

inline const std::vector<std::string>& surface_names() {
    static const std::vector<std::string> names{"tetrahedron", "octahedron", "icosahedron",
                                                "torus", "genus2"};
    return names;
}

inline const std::vector<std::string>& manifold_names() {
    static const std::vector<std::string> names{"5cell", "16cell"};
    return names;
}

inline bool is_manifold_name(const std::string& name) {
    return name == "5cell" || name == "16cell";
}

inline Surface2Complex surface(const std::string& name) {
    if (name == "tetrahedron") return tetrahedron();
    if (name == "octahedron") return octahedron();
    if (name == "icosahedron") return icosahedron();
    if (name == "torus") return flat_torus(4);
    if (name == "genus2") return genus2();
    throw InvalidInput("unknown built-in surface '" + name + "'");
}

inline Manifold3Complex manifold(const std::string& name) {
    if (name == "5cell") return five_cell();
    if (name == "16cell") return sixteen_cell();
    throw InvalidInput("unknown built-in 3-manifold '" + name + "'");
}

}  // namespace packflow::meshes
