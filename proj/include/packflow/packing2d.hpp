#pragma once

// Circle packing metrics on weighted triangulated surfaces.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "packflow/error.hpp"
#include "packflow/mesh.hpp"

namespace packflow {

/// Per-vertex curvature values. K is in radians, R_alpha in radians per length^alpha.
using CurvatureVector = Eigen::VectorXd;

/// Positive radius per vertex. Shared by circle (2D) and sphere (3D) packings.
class PackingMetric {
public:
    PackingMetric() = default;

    explicit PackingMetric(Eigen::VectorXd radii) : r_(std::move(radii)) {
        if (r_.size() == 0) throw InvalidInput("metric has no radii");
        for (Eigen::Index i = 0; i < r_.size(); ++i)
            if (!(r_[i] > 0.0) || !std::isfinite(r_[i]))
                throw InvalidInput("radius " + std::to_string(i) + " is not a positive finite number");
    }

    explicit PackingMetric(const std::vector<double>& radii)
        : PackingMetric(Eigen::Map<const Eigen::VectorXd>(radii.data(),
                                                           static_cast<Eigen::Index>(radii.size()))) {}

    static PackingMetric constant(int n, double value = 1.0) {
        return PackingMetric(Eigen::VectorXd::Constant(n, value));
    }

    static PackingMetric from_log(const Eigen::VectorXd& log_r) {
        return PackingMetric(Eigen::VectorXd(log_r.array().exp()));
    }

    int size() const { return static_cast<int>(r_.size()); }
    double operator[](int i) const { return r_[i]; }
    const Eigen::VectorXd& radii() const { return r_; }
    Eigen::VectorXd log_radii() const { return r_.array().log(); }

    PackingMetric scaled(double lambda) const { return PackingMetric(Eigen::VectorXd(lambda * r_)); }

private:
    Eigen::VectorXd r_;
};

inline void require_matching(const Surface2Complex& c, const PackingMetric& r) {
    if (r.size() != c.vertex_count())
        throw InvalidInput("metric has " + std::to_string(r.size()) + " radii but complex has " +
                           std::to_string(c.vertex_count()) + " vertices");
}

/// sum_i r_i^alpha, with the convention ||r||_0^0 = N.
inline double total_measure(const PackingMetric& r, double alpha) {
    if (alpha == 0.0) return static_cast<double>(r.size());
    return r.radii().array().pow(alpha).sum();
}

/// r_i^alpha per vertex (all ones for alpha = 0).
inline Eigen::VectorXd radii_pow(const PackingMetric& r, double alpha) {
    if (alpha == 0.0) return Eigen::VectorXd::Ones(r.size());
    return r.radii().array().pow(alpha);
}

inline double edge_length(double ri, double rj, double phi) {
    return std::sqrt(ri * ri + rj * rj + 2.0 * ri * rj * std::cos(phi));
}

/// l_ij per edge, indexed like c.edges().
inline Eigen::VectorXd edge_lengths(const Surface2Complex& c, const PackingMetric& r) {
    require_matching(c, r);
    Eigen::VectorXd l(c.edge_count());
    for (int e = 0; e < c.edge_count(); ++e) {
        const auto& ed = c.edge(e);
        l[e] = edge_length(r[ed[0]], r[ed[1]], c.weight(e));
    }
    return l;
}

inline constexpr double kAngleClamp = 1e-9;

/// arccos with the roundoff clamp: arguments within 1e-9 outside [-1, 1] are
/// clamped, anything further raises DegenerateTriangle.
inline double checked_acos(double x, int face) {
    if (!std::isfinite(x) || x > 1.0 + kAngleClamp || x < -1.0 - kAngleClamp)
        throw DegenerateTriangle(face, "face " + std::to_string(face) +
                                           ": law-of-cosines argument " + std::to_string(x) +
                                           " outside [-1, 1]");
    return std::acos(std::clamp(x, -1.0, 1.0));
}

/// Angle opposite side a in a triangle with sides a, b, c.
inline double angle_opposite(double a, double b, double c, int face) {
    return checked_acos((b * b + c * c - a * a) / (2.0 * b * c), face);
}

/// Side lengths of face f; entry k is opposite face vertex k.
inline std::array<double, 3> face_sides(const Surface2Complex& c, const Eigen::VectorXd& lengths,
                                        int f) {
    const auto& fe = c.face_edges(f);
    return {lengths[fe[0]], lengths[fe[1]], lengths[fe[2]]};
}

/// Inner angles per face; entry [f][k] is the angle at vertex c.face(f)[k].
inline std::vector<std::array<double, 3>> inner_angles(const Surface2Complex& c,
                                                       const PackingMetric& r) {
    const Eigen::VectorXd l = edge_lengths(c, r);
    std::vector<std::array<double, 3>> out(c.face_count());
    for (int f = 0; f < c.face_count(); ++f) {
        const auto s = face_sides(c, l, f);
        for (int k = 0; k < 3; ++k)
            out[f][k] = angle_opposite(s[k], s[(k + 1) % 3], s[(k + 2) % 3], f);
    }
    return out;
}

/// Angle deficit K_i = 2pi - sum of inner angles at i.
inline CurvatureVector curvature_K(const Surface2Complex& c, const PackingMetric& r) {
    const auto angles = inner_angles(c, r);
    CurvatureVector K = CurvatureVector::Constant(c.vertex_count(), 2.0 * std::numbers::pi);
    for (int f = 0; f < c.face_count(); ++f)
        for (int k = 0; k < 3; ++k) K[c.face(f)[k]] -= angles[f][k];
    return K;
}

/// R_alpha,i = K_i / r_i^alpha.
inline CurvatureVector curvature_alpha(const Surface2Complex& c, const PackingMetric& r,
                                       double alpha) {
    CurvatureVector K = curvature_K(c, r);
    if (alpha == 0.0) return K;
    return K.array() / r.radii().array().pow(alpha);
}

/// R_i = K_i / r_i^2.
inline CurvatureVector curvature_R(const Surface2Complex& c, const PackingMetric& r) {
    return curvature_alpha(c, r, 2.0);
}

struct Averages {
    double K_av;
    double R_av;
    double R_alpha_av;
};

inline double average_alpha_curvature(const Surface2Complex& c, const PackingMetric& r,
                                      double alpha) {
    return 2.0 * std::numbers::pi * c.euler_characteristic() / total_measure(r, alpha);
}

inline Averages averages(const Surface2Complex& c, const PackingMetric& r, double alpha) {
    require_matching(c, r);
    return {average_alpha_curvature(c, r, 0.0), average_alpha_curvature(c, r, 2.0),
            average_alpha_curvature(c, r, alpha)};
}

/// Scale-free distance to constant alpha-curvature:
/// max_i |R_alpha,i - R_alpha,av| * ||r||_alpha^alpha / (2 pi |chi| + 1).
inline double constant_curvature_residual(const Surface2Complex& c, const PackingMetric& r,
                                          double alpha) {
    const CurvatureVector Ra = curvature_alpha(c, r, alpha);
    const double measure = total_measure(r, alpha);
    const double chi = c.euler_characteristic();
    const double avg = 2.0 * std::numbers::pi * chi / measure;
    return (Ra.array() - avg).abs().maxCoeff() * measure /
           (2.0 * std::numbers::pi * std::abs(chi) + 1.0);
}

/// max_i |K_i - Rbar_i r_i^alpha|.
inline double prescribed_curvature_residual(const Surface2Complex& c, const PackingMetric& r,
                                            double alpha, const Eigen::VectorXd& target) {
    const CurvatureVector K = curvature_K(c, r);
    return (K.array() - target.array() * radii_pow(r, alpha).array()).abs().maxCoeff();
}

}  // namespace packflow
