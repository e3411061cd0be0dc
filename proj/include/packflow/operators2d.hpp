#pragma once

// Curvature Jacobians, discrete Laplacians, spectra, Ricci potentials and
// Calabi energies on circle packing metrics.
//
// Internally every derivative is taken with respect to u = ln r. Quantities
// in u = ln r^2 differ by a factor 1/2 per derivative.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "packflow/error.hpp"
#include "packflow/mesh.hpp"
#include "packflow/packing2d.hpp"
#include "packflow/quadrature.hpp"

namespace packflow {

enum class LogCoordinate { log_r, log_r_squared };

inline const char* to_string(LogCoordinate c) {
    return c == LogCoordinate::log_r ? "ln r" : "ln r^2";
}

/// Factor turning a d/d(ln r) quantity into d/d(ln r^2), raised to `order`.
inline double coordinate_factor(LogCoordinate c, int order = 1) {
    return c == LogCoordinate::log_r ? 1.0 : std::pow(0.5, order);
}

struct JacobianMatrix {
    Eigen::MatrixXd matrix;
    LogCoordinate coordinate = LogCoordinate::log_r;

    /// The same second-order quantity expressed in another coordinate.
    JacobianMatrix in(LogCoordinate target) const {
        if (target == coordinate) return *this;
        const double f = target == LogCoordinate::log_r_squared ? 0.5 : 2.0;
        return {f * matrix, target};
    }
};

/// d(theta_p)/d(ln r_m) for one face, slots p, m in {0,1,2}.
struct FaceAngleDerivatives {
    std::array<std::array<double, 3>, 3> d{};
};

inline FaceAngleDerivatives face_angle_derivatives(const Surface2Complex& c, const PackingMetric& r,
                                                   const Eigen::VectorXd& lengths, int f) {
    const auto& t = c.face(f);
    const auto& fe = c.face_edges(f);
    const auto a = face_sides(c, lengths, f);
    std::array<double, 3> theta{}, cos_theta{};
    for (int k = 0; k < 3; ++k) {
        theta[k] = angle_opposite(a[k], a[(k + 1) % 3], a[(k + 2) % 3], f);
        cos_theta[k] = std::cos(theta[k]);
    }
    const double area2 = a[1] * a[2] * std::sin(theta[0]);
    if (!(area2 > 0.0))
        throw DegenerateTriangle(f, "face " + std::to_string(f) + " has zero area");

    // d theta_p / d a_q, a_q the side opposite slot q
    std::array<std::array<double, 3>, 3> dtheta_da{};
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            if (q == p) {
                dtheta_da[p][q] = a[p] / area2;
            } else {
                const int s = 3 - p - q;
                dtheta_da[p][q] = -a[p] * cos_theta[s] / area2;
            }
        }

    // d a_q / d ln r_m for the two endpoints m of side q
    FaceAngleDerivatives out;
    for (int q = 0; q < 3; ++q) {
        const double phi = c.weight(fe[q]);
        for (int m = 0; m < 3; ++m) {
            if (m == q) continue;
            const int n = 3 - q - m;
            const double rm = r[t[m]], rn = r[t[n]];
            const double da = rm * (rm + rn * std::cos(phi)) / a[q];
            for (int p = 0; p < 3; ++p) out.d[p][m] += dtheta_da[p][q] * da;
        }
    }
    return out;
}

/// Analytic Jacobian dK_i/d(ln r_j), assembled per face.
inline JacobianMatrix jacobian_logr(const Surface2Complex& c, const PackingMetric& r) {
    require_matching(c, r);
    const int n = c.vertex_count();
    const Eigen::VectorXd l = edge_lengths(c, r);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (int f = 0; f < c.face_count(); ++f) {
        const auto& t = c.face(f);
        const auto dd = face_angle_derivatives(c, r, l, f);
        for (int p = 0; p < 3; ++p)
            for (int m = 0; m < 3; ++m) L(t[p], t[m]) -= dd.d[p][m];
    }
    return {L, LogCoordinate::log_r};
}

/// Jacobian in the requested coordinate (L = dK/d ln r^2 = L~/2).
inline JacobianMatrix jacobian(const Surface2Complex& c, const PackingMetric& r,
                               LogCoordinate coord) {
    return jacobian_logr(c, r).in(coord);
}

/// Delta f = -Sigma^{-1} L f with Sigma = diag(r^2), L in ln r^2.
inline Eigen::VectorXd laplacian_apply(const Surface2Complex& c, const PackingMetric& r,
                                       const Eigen::VectorXd& f) {
    const Eigen::MatrixXd L = jacobian(c, r, LogCoordinate::log_r_squared).matrix;
    return -(L * f).array() / r.radii().array().square();
}

/// Delta_alpha f = -diag(r^-alpha) L~ f, L~ in ln r.
inline Eigen::VectorXd alpha_laplacian_apply(const Surface2Complex& c, const PackingMetric& r,
                                             double alpha, const Eigen::VectorXd& f) {
    const Eigen::MatrixXd L = jacobian_logr(c, r).matrix;
    return -(L * f).array() / radii_pow(r, alpha).array();
}

struct SpectrumReport {
    Eigen::VectorXd eigenvalues;  // ascending, of Sigma^{-1/2} L Sigma^{-1/2}
    Eigen::VectorXd kernel_vector;
    double kernel_eigenvalue = 0.0;
    double lambda1 = 0.0;
    double spectral_radius = 0.0;
    int kernel_dimension = 0;
    /// |<kernel_vector, r/|r|>| deviation from 1.
    double kernel_alignment_error = 0.0;
};

/// Spectrum of Lambda = Sigma^{-1/2} L Sigma^{-1/2}, which is similar to -Delta.
inline SpectrumReport spectrum(const Surface2Complex& c, const PackingMetric& r) {
    const Eigen::MatrixXd L = jacobian(c, r, LogCoordinate::log_r_squared).matrix;
    const Eigen::VectorXd s = r.radii().cwiseInverse();
    Eigen::MatrixXd Lambda = s.asDiagonal() * L * s.asDiagonal();
    Lambda = 0.5 * (Lambda + Lambda.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Lambda);
    if (solver.info() != Eigen::Success)
        throw SpectralFailure("symmetric eigensolver did not converge");
    SpectrumReport rep;
    rep.eigenvalues = solver.eigenvalues();
    rep.spectral_radius = rep.eigenvalues.cwiseAbs().maxCoeff();
    const double thresh = 1e-9 * std::max(1.0, rep.spectral_radius);
    Eigen::Index k0 = 0;
    rep.eigenvalues.cwiseAbs().minCoeff(&k0);
    rep.kernel_eigenvalue = rep.eigenvalues[k0];
    rep.kernel_vector = solver.eigenvectors().col(k0);
    for (Eigen::Index k = 0; k < rep.eigenvalues.size(); ++k)
        if (std::abs(rep.eigenvalues[k]) < thresh) ++rep.kernel_dimension;
    rep.lambda1 = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index k = 0; k < rep.eigenvalues.size(); ++k)
        if (k != k0 && rep.eigenvalues[k] > thresh) {
            rep.lambda1 = rep.eigenvalues[k];
            break;
        }
    const Eigen::VectorXd e0 = r.radii().normalized();
    rep.kernel_alignment_error = std::abs(1.0 - std::abs(rep.kernel_vector.dot(e0)));
    return rep;
}

/// Smallest nonzero eigenvalue of -Delta.
inline double first_positive_eigenvalue(const Surface2Complex& c, const PackingMetric& r) {
    const SpectrumReport rep = spectrum(c, r);
    if (rep.kernel_dimension != 1 || !std::isfinite(rep.lambda1))
        throw SpectralFailure("expected a one-dimensional kernel, found dimension " +
                              std::to_string(rep.kernel_dimension));
    return rep.lambda1;
}

/// Gradient of the Ricci potential in ln r: K - R_alpha,av r^alpha, or
/// K - Rbar r^alpha for a prescribed target.
inline Eigen::VectorXd potential_gradient_logr(const Surface2Complex& c, const PackingMetric& r,
                                               double alpha,
                                               const std::optional<Eigen::VectorXd>& target = {}) {
    const Eigen::VectorXd K = curvature_K(c, r);
    const Eigen::VectorXd ra = radii_pow(r, alpha);
    if (target) return K.array() - target->array() * ra.array();
    return K - average_alpha_curvature(c, r, alpha) * ra;
}

/// Calabi residual phi_alpha (same vector as the potential gradient).
inline Eigen::VectorXd calabi_residual(const Surface2Complex& c, const PackingMetric& r,
                                       double alpha,
                                       const std::optional<Eigen::VectorXd>& target = {}) {
    return potential_gradient_logr(c, r, alpha, target);
}

struct PotentialValue {
    double value = 0.0;
    Eigen::VectorXd base;  // u_0
    Eigen::VectorXd point;  // u
    LogCoordinate coordinate = LogCoordinate::log_r;
};

/// Ricci potential at u relative to u0, both given in `coord`. The line
/// integral is taken along the straight segment.
inline PotentialValue ricci_potential(const Surface2Complex& c, const Eigen::VectorXd& u0,
                                      const Eigen::VectorXd& u, double alpha,
                                      const std::optional<Eigen::VectorXd>& target = {},
                                      LogCoordinate coord = LogCoordinate::log_r,
                                      const QuadratureOptions& quad = {}) {
    if (u0.size() != c.vertex_count() || u.size() != c.vertex_count())
        throw InvalidInput("potential endpoints do not match the vertex count");
    const double to_logr = coord == LogCoordinate::log_r ? 1.0 : 0.5;
    const Eigen::VectorXd a = to_logr * u0;
    const Eigen::VectorXd d = to_logr * (u - u0);
    auto integrand = [&](double t) {
        const PackingMetric rt = PackingMetric::from_log(a + t * d);
        return potential_gradient_logr(c, rt, alpha, target).dot(d);
    };
    PotentialValue out;
    out.value = d.isZero(0.0) ? 0.0 : integrate(integrand, 0.0, 1.0, quad);
    // same gradient vector in both coordinates, and d(ln r^2) = 2 d(ln r)
    out.value /= coordinate_factor(coord);
    out.base = u0;
    out.point = u;
    out.coordinate = coord;
    return out;
}

/// Hessian of the Ricci potential:
/// L~ - alpha R_av diag(r^{a/2}) (I - s s^T / ||r||_a^a) diag(r^{a/2}), s = r^{a/2};
/// for a prescribed target: L~ - alpha diag(Rbar r^alpha).
inline JacobianMatrix hessian_ricci_potential(const Surface2Complex& c, const PackingMetric& r,
                                              double alpha,
                                              const std::optional<Eigen::VectorXd>& target = {},
                                              LogCoordinate coord = LogCoordinate::log_r) {
    Eigen::MatrixXd H = jacobian_logr(c, r).matrix;
    const Eigen::VectorXd ra = radii_pow(r, alpha);
    if (target) {
        H.diagonal() -= alpha * (target->array() * ra.array()).matrix();
    } else if (alpha != 0.0) {
        const double avg = average_alpha_curvature(c, r, alpha);
        const double measure = ra.sum();
        H.diagonal() -= alpha * avg * ra;
        H += (alpha * avg / measure) * ra * ra.transpose();
    }
    return JacobianMatrix{H, LogCoordinate::log_r}.in(coord);
}

/// Calabi energy sum_i phi_i^2.
inline double calabi_energy(const Surface2Complex& c, const PackingMetric& r, double alpha,
                            const std::optional<Eigen::VectorXd>& target = {}) {
    return calabi_residual(c, r, alpha, target).squaredNorm();
}

/// Gradient 2 A^T phi of the Calabi energy, A the potential Hessian, both in `coord`.
inline Eigen::VectorXd calabi_gradient(const Surface2Complex& c, const PackingMetric& r,
                                       double alpha,
                                       const std::optional<Eigen::VectorXd>& target = {},
                                       LogCoordinate coord = LogCoordinate::log_r) {
    const Eigen::MatrixXd A = hessian_ricci_potential(c, r, alpha, target, coord).matrix;
    return 2.0 * A.transpose() * calabi_residual(c, r, alpha, target);
}

}  // namespace packflow
