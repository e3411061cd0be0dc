#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's geometry; curvatures come from explicit planar or spatial
// embeddings, derivatives from finite differences.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

using Faces = std::vector<std::array<int, 3>>;
using Tets = std::vector<std::array<int, 4>>;
using EdgeWeights = std::map<std::pair<int, int>, double>;

inline std::pair<int, int> key(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

inline double weight(const EdgeWeights& w, int i, int j) {
    auto it = w.find(key(i, j));
    return it == w.end() ? 0.0 : it->second;
}

inline Eigen::VectorXd random_radii(int n, std::mt19937_64& rng, double lo = 0.5, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = u(rng);
    return r;
}

/// Triangulated m x n grid with opposite sides identified.
inline Faces grid_torus(int m, int n) {
    Faces out;
    auto id = [&](int i, int j) { return ((i + m) % m) * n + (j + n) % n; };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            out.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            out.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return out;
}

/// Inner angles of a triangle with side lengths l01, l12, l02, read off a
/// planar placement with atan2.
inline std::array<double, 3> planar_angles(double l01, double l12, double l02) {
    const double x = (l01 * l01 + l02 * l02 - l12 * l12) / (2.0 * l01);
    const double y = std::sqrt(std::max(0.0, l02 * l02 - x * x));
    const Eigen::Vector2d p0(0, 0), p1(l01, 0), p2(x, y);
    auto angle = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return std::atan2(std::abs(a.x() * b.y() - a.y() * b.x()), a.dot(b));
    };
    return {angle(p1 - p0, p2 - p0), angle(p0 - p1, p2 - p1), angle(p0 - p2, p1 - p2)};
}

inline double packing_length(double ri, double rj, double phi) {
    return std::sqrt(ri * ri + rj * rj + 2.0 * ri * rj * std::cos(phi));
}

/// K_i = 2 pi - sum of angles at i.
inline Eigen::VectorXd curvature_2d(int n, const Faces& faces, const EdgeWeights& w,
                                    const Eigen::VectorXd& r) {
    Eigen::VectorXd K = Eigen::VectorXd::Constant(n, 2.0 * pi);
    for (const auto& f : faces) {
        const int a = f[0], b = f[1], c = f[2];
        const auto th = planar_angles(packing_length(r[a], r[b], weight(w, a, b)),
                                      packing_length(r[b], r[c], weight(w, b, c)),
                                      packing_length(r[a], r[c], weight(w, a, c)));
        K[a] -= th[0];
        K[b] -= th[1];
        K[c] -= th[2];
    }
    return K;
}

inline int euler_characteristic(int n, const Faces& faces) {
    std::set<std::pair<int, int>> edges;
    for (const auto& f : faces)
        for (int k = 0; k < 3; ++k) edges.insert(key(f[k], f[(k + 1) % 3]));
    return n - static_cast<int>(edges.size()) + static_cast<int>(faces.size());
}

/// Central-difference Jacobian of f at x.
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (int j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

/// Richardson-extrapolated central differences (error O(h^4)).
inline Eigen::MatrixXd fd_jacobian4(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x, double h = 1e-3) {
    return (4.0 * fd_jacobian(f, x, h / 2) - fd_jacobian(f, x, h)) / 3.0;
}

/// Right-hand side of the subset inequality by direct scans: link pairs are
/// (edge avoiding I, vertex in I) spanning a listed face.
inline double subset_rhs(int n, const Faces& faces, const EdgeWeights& w, const std::vector<int>& subset) {
    std::vector<char> in(n, 0);
    for (int v : subset) in[v] = 1;
    std::set<std::array<int, 3>> face_set;
    std::set<std::pair<int, int>> edge_set;
    for (auto f : faces) {
        std::sort(f.begin(), f.end());
        face_set.insert(f);
        for (int k = 0; k < 3; ++k) edge_set.insert(key(f[k], f[(k + 1) % 3]));
    }
    double link = 0.0;
    for (const auto& e : edge_set) {
        if (in[e.first] || in[e.second]) continue;
        for (int v : subset) {
            std::array<int, 3> t{e.first, e.second, v};
            std::sort(t.begin(), t.end());
            if (face_set.count(t)) link += pi - weight(w, e.first, e.second);
        }
    }
    int V = static_cast<int>(subset.size()), E = 0, F = 0;
    for (const auto& e : edge_set) E += in[e.first] && in[e.second];
    for (const auto& f : face_set) F += in[f[0]] && in[f[1]] && in[f[2]];
    return -link + 2.0 * pi * (V - E + F);
}

// ---------------------------------------------------------------- 3D

/// Points realizing the six distances of a tetrahedron (ij order 01 02 03 12 13 23).
inline std::array<Eigen::Vector3d, 4> embed_tetrahedron(const std::array<double, 6>& l) {
    const double d01 = l[0], d02 = l[1], d03 = l[2], d12 = l[3], d13 = l[4], d23 = l[5];
    Eigen::Vector3d p0(0, 0, 0), p1(d01, 0, 0);
    const double x2 = (d01 * d01 + d02 * d02 - d12 * d12) / (2 * d01);
    const double y2 = std::sqrt(std::max(0.0, d02 * d02 - x2 * x2));
    Eigen::Vector3d p2(x2, y2, 0);
    const double x3 = (d01 * d01 + d03 * d03 - d13 * d13) / (2 * d01);
    const double y3 = (d03 * d03 - d23 * d23 + x2 * x2 + y2 * y2 - 2 * x2 * x3) / (2 * y2);
    const double z3 = std::sqrt(std::max(0.0, d03 * d03 - x3 * x3 - y3 * y3));
    Eigen::Vector3d p3(x3, y3, z3);
    return {p0, p1, p2, p3};
}

/// Solid angle at the apex spanned by vectors a, b, c (Van Oosterom-Strackee).
inline double solid_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = std::abs(a.dot(b.cross(c)));
    const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
    double omega = 2.0 * std::atan2(num, den);
    if (omega < 0) omega += 4.0 * pi;
    return omega;
}

inline std::array<double, 4> tet_solid_angles(const std::array<double, 4>& r) {
    const std::array<double, 6> l{r[0] + r[1], r[0] + r[2], r[0] + r[3],
                                  r[1] + r[2], r[1] + r[3], r[2] + r[3]};
    const auto p = embed_tetrahedron(l);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) {
        std::array<Eigen::Vector3d, 3> v;
        int k = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) v[k++] = p[j] - p[i];
        out[i] = solid_angle(v[0], v[1], v[2]);
    }
    return out;
}

inline double tet_volume(const std::array<double, 4>& r) {
    const std::array<double, 6> l{r[0] + r[1], r[0] + r[2], r[0] + r[3],
                                  r[1] + r[2], r[1] + r[3], r[2] + r[3]};
    const auto p = embed_tetrahedron(l);
    return std::abs((p[1] - p[0]).dot((p[2] - p[0]).cross(p[3] - p[0]))) / 6.0;
}

/// K_i = 4 pi - sum of solid angles at i.
inline Eigen::VectorXd curvature_3d(int n, const Tets& tets, const Eigen::VectorXd& r) {
    Eigen::VectorXd K = Eigen::VectorXd::Constant(n, 4.0 * pi);
    for (const auto& t : tets) {
        const auto om = tet_solid_angles({r[t[0]], r[t[1]], r[t[2]], r[t[3]]});
        for (int k = 0; k < 4; ++k) K[t[k]] -= om[k];
    }
    return K;
}

/// Tetrahedra of the boundary of the 4-simplex on vertices 0..4.
inline Tets five_cell_tets() {
    Tets out;
    for (int skip = 4; skip >= 0; --skip) {
        std::array<int, 4> t{};
        int k = 0;
        for (int v = 0; v < 5; ++v)
            if (v != skip) t[k++] = v;
        out.push_back(t);
    }
    return out;
}

/// Simple bisection for a sign change of g on [a, b].
inline double bisect(const std::function<double(double)>& g, double a, double b, int iterations = 200) {
    double ga = g(a);
    for (int k = 0; k < iterations; ++k) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((gm < 0) == (ga < 0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace oracle
