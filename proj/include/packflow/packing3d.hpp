#pragma once

// Sphere packing metrics on triangulated 3-manifolds: tetrahedron
// nondegeneracy, solid angles, Cooper-Rivin curvature, total scalar
// curvature, the Yamabe functional, the curvature Jacobian and Laplacian,
// and the normalized Yamabe flow with singularity classification.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "packflow/error.hpp"
#include "packflow/integrator.hpp"
#include "packflow/mesh.hpp"
#include "packflow/packing2d.hpp"

namespace packflow {

/// (sum 1/r)^2 - 2 sum 1/r^2; the four spheres span a Euclidean tetrahedron
/// iff this is positive.
inline double q_factor(double ri, double rj, double rk, double rl) {
    const double a = 1.0 / ri, b = 1.0 / rj, c = 1.0 / rk, d = 1.0 / rl;
    const double s = a + b + c + d;
    return s * s - 2.0 * (a * a + b * b + c * c + d * d);
}

inline double q_factor(const std::array<double, 4>& r) { return q_factor(r[0], r[1], r[2], r[3]); }

/// Vertex pairs in the order used for TetGeometry::lengths.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct TetGeometry {
    std::array<double, 4> radii{};
    std::array<double, 6> lengths{};  // l = r_i + r_j, order of kTetEdges
    double q = 0.0;
    /// Cayley-Menger determinant, 288 V^2.
    double cayley_menger = 0.0;
    std::array<Eigen::Vector3d, 4> coords;
    std::array<double, 4> solid_angles{};
};

namespace detail {

inline double tet_length(const std::array<double, 6>& l, int i, int j) {
    if (i > j) std::swap(i, j);
    for (int e = 0; e < 6; ++e)
        if (kTetEdges[e][0] == i && kTetEdges[e][1] == j) return l[e];
    return 0.0;
}

/// Determinant evaluated on lengths scaled to max 1, then rescaled.
inline double cayley_menger(const std::array<double, 6>& l) {
    const double s = *std::max_element(l.begin(), l.end());
    Eigen::Matrix<double, 5, 5> m;
    m.setOnes();
    m(0, 0) = 0.0;
    for (int i = 0; i < 4; ++i) {
        m(i + 1, i + 1) = 0.0;
        for (int j = 0; j < 4; ++j)
            if (i != j) m(i + 1, j + 1) = std::pow(tet_length(l, i, j) / s, 2);
    }
    return m.determinant() * std::pow(s, 6);
}

inline std::string radii_text(const std::array<double, 4>& r) {
    return "(" + std::to_string(r[0]) + ", " + std::to_string(r[1]) + ", " + std::to_string(r[2]) +
           ", " + std::to_string(r[3]) + ")";
}

}  // namespace detail

/// Full geometry of the tetrahedron spanned by four tangent spheres.
/// Solid angles come from the three face angles at each vertex: the dihedral
/// angles follow from the spherical law of cosines and the solid angle is
/// their sum minus pi.
inline TetGeometry tet_geometry(const std::array<double, 4>& radii, int tet_id = -1) {
    TetGeometry g;
    g.radii = radii;
    for (double x : radii)
        if (!(x > 0.0) || !std::isfinite(x))
            throw InvalidInput("sphere radii must be positive and finite");
    g.q = q_factor(radii);
    if (!(g.q > 0.0))
        throw DegenerateTetrahedron(tet_id, "tetrahedron " + std::to_string(tet_id) + " radii " +
                                                detail::radii_text(radii) +
                                                " not realizable: Q = " + std::to_string(g.q));
    for (int e = 0; e < 6; ++e) g.lengths[e] = radii[kTetEdges[e][0]] + radii[kTetEdges[e][1]];
    g.cayley_menger = detail::cayley_menger(g.lengths);
    if (!(g.cayley_menger > 0.0))
        throw DegenerateTetrahedron(tet_id, "tetrahedron " + std::to_string(tet_id) +
                                                ": Cayley-Menger determinant is not positive, radii " + detail::radii_text(radii) + " cm " + std::to_string(g.cayley_menger) + " q " + std::to_string(g.q));

    auto L = [&](int i, int j) { return detail::tet_length(g.lengths, i, j); };
    // distance-geometry embedding
    const double l01 = L(0, 1), l02 = L(0, 2), l03 = L(0, 3);
    const double x2 = (l01 * l01 + l02 * l02 - L(1, 2) * L(1, 2)) / (2.0 * l01);
    const double y2 = std::sqrt(std::max(0.0, l02 * l02 - x2 * x2));
    const double x3 = (l01 * l01 + l03 * l03 - L(1, 3) * L(1, 3)) / (2.0 * l01);
    const double y3 = (l02 * l02 + l03 * l03 - L(2, 3) * L(2, 3) - 2.0 * x2 * x3) / (2.0 * y2);
    const double z3 = std::sqrt(std::max(0.0, l03 * l03 - x3 * x3 - y3 * y3));
    g.coords = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(l01, 0, 0), Eigen::Vector3d(x2, y2, 0),
                Eigen::Vector3d(x3, y3, z3)};

    for (int i = 0; i < 4; ++i) {
        std::array<int, 3> o{};
        int k = 0;
        for (int j = 0; j < 4; ++j)
            if (j != i) o[k++] = j;
        // face angle at i between edges i-o[a] and i-o[b]; index by the missing neighbour
        std::array<double, 3> cos_face{}, sin_face{};
        for (int m = 0; m < 3; ++m) {
            const int a = o[(m + 1) % 3], b = o[(m + 2) % 3];
            const double c = (L(i, a) * L(i, a) + L(i, b) * L(i, b) - L(a, b) * L(a, b)) /
                             (2.0 * L(i, a) * L(i, b));
            cos_face[m] = std::clamp(c, -1.0, 1.0);
            sin_face[m] = std::sqrt(std::max(0.0, 1.0 - cos_face[m] * cos_face[m]));
        }
        // dihedral angle along edge i-o[m]: opposite side is the face angle
        // between the other two edges, i.e. cos_face[m]
        double sum = 0.0;
        for (int m = 0; m < 3; ++m) {
            const int p = (m + 1) % 3, q = (m + 2) % 3;
            const double c = (cos_face[m] - cos_face[p] * cos_face[q]) / (sin_face[p] * sin_face[q]);
            sum += std::acos(std::clamp(c, -1.0, 1.0));
        }
        g.solid_angles[i] = sum - std::numbers::pi;
    }
    return g;
}

inline std::array<double, 4> solid_angles(const std::array<double, 4>& radii) {
    return tet_geometry(radii).solid_angles;
}

inline void require_matching(const Manifold3Complex& c, const PackingMetric& r) {
    if (r.size() != c.vertex_count())
        throw InvalidInput("metric has " + std::to_string(r.size()) + " radii but complex has " +
                           std::to_string(c.vertex_count()) + " vertices");
}

inline std::array<double, 4> tet_radii(const Manifold3Complex& c, const PackingMetric& r, int t) {
    const auto& v = c.tetrahedron(t);
    return {r[v[0]], r[v[1]], r[v[2]], r[v[3]]};
}

/// Solid-angle deficit K_i = 4 pi - sum of solid angles at i.
inline CurvatureVector curvature_K3(const Manifold3Complex& c, const PackingMetric& r) {
    require_matching(c, r);
    CurvatureVector K = CurvatureVector::Constant(c.vertex_count(), 4.0 * std::numbers::pi);
    for (int t = 0; t < c.tetrahedron_count(); ++t) {
        const auto a = tet_geometry(tet_radii(c, r, t), t).solid_angles;
        const auto& v = c.tetrahedron(t);
        for (int k = 0; k < 4; ++k) K[v[k]] -= a[k];
    }
    return K;
}

/// R_i = K_i / r_i^2.
inline CurvatureVector curvature_R3(const Manifold3Complex& c, const PackingMetric& r) {
    return curvature_K3(c, r).array() / r.radii().array().square();
}

struct YamabeState {
    PackingMetric metric;
    CurvatureVector K;
    CurvatureVector R;
    double S = 0.0;  // sum K_i r_i
    double V = 0.0;  // sum r_i^3
    double R_av = 0.0;
    double Q = 0.0;  // S / V^{1/3}
};

inline YamabeState totals(const Manifold3Complex& c, const PackingMetric& r) {
    YamabeState s;
    s.metric = r;
    s.K = curvature_K3(c, r);
    s.R = s.K.array() / r.radii().array().square();
    s.S = s.K.dot(r.radii());
    s.V = r.radii().array().cube().sum();
    s.R_av = s.S / s.V;
    s.Q = s.S / std::cbrt(s.V);
    return s;
}

/// dQ/dr = (K - R_av r^2) / V^{1/3}.
inline Eigen::VectorXd yamabe_gradient(const YamabeState& s) {
    return (s.K.array() - s.R_av * s.metric.radii().array().square()).matrix() / std::cbrt(s.V);
}

/// ||K||_{3/2} = (sum |K_i|^{3/2})^{2/3}.
inline double curvature_norm_3_2(const CurvatureVector& K) {
    return std::pow(K.array().abs().pow(1.5).sum(), 2.0 / 3.0);
}

/// Smallest Q factor over all tetrahedra, evaluated on r / ||r||_3.
inline double min_normalized_q(const Manifold3Complex& c, const PackingMetric& r, int* which = nullptr) {
    const double scale = std::cbrt(r.radii().array().cube().sum());
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < c.tetrahedron_count(); ++t) {
        auto rr = tet_radii(c, r, t);
        for (double& x : rr) x /= scale;
        const double q = q_factor(rr);
        if (q < best) {
            best = q;
            if (which) *which = t;
        }
    }
    return best;
}

inline constexpr double kJacobianSafetyMargin = 1e-6;

/// Lambda_ij = dK_i/dr_j by central differences (h = 1e-5 r_j) with one level
/// of Richardson extrapolation.
inline Eigen::MatrixXd jacobian3d(const Manifold3Complex& c, const PackingMetric& r) {
    require_matching(c, r);
    int worst = -1;
    const double qmin = min_normalized_q(c, r, &worst);
    if (!(qmin > kJacobianSafetyMargin))
        throw NearDegenerate("tetrahedron " + std::to_string(worst) + " has normalized Q = " +
                             std::to_string(qmin) + " inside the safety margin");
    const int n = c.vertex_count();
    Eigen::MatrixXd J(n, n);
    auto central = [&](int j, double h) {
        Eigen::VectorXd rp = r.radii(), rm = r.radii();
        rp[j] += h;
        rm[j] -= h;
        return Eigen::VectorXd((curvature_K3(c, PackingMetric(rp)) - curvature_K3(c, PackingMetric(rm))) /
                               (2.0 * h));
    };
    for (int j = 0; j < n; ++j) {
        const double h = 1e-5 * r[j];
        const Eigen::VectorXd d1 = central(j, h);
        const Eigen::VectorXd d2 = central(j, 0.5 * h);
        J.col(j) = (4.0 * d2 - d1) / 3.0;
    }
    return J;
}

/// (Delta f)_i = (1/r_i^2) sum_j (-Lambda_ij r_j)(f_j - f_i).
inline Eigen::VectorXd laplacian3d_apply(const Manifold3Complex& c, const PackingMetric& r,
                                         const Eigen::VectorXd& f) {
    const Eigen::MatrixXd J = jacobian3d(c, r);
    const Eigen::VectorXd& rr = r.radii();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(c.vertex_count());
    for (int i = 0; i < c.vertex_count(); ++i) {
        double s = 0.0;
        for (int j = 0; j < c.vertex_count(); ++j)
            if (j != i) s += -J(i, j) * rr[j] * (f[j] - f[i]);
        out[i] = s / (rr[i] * rr[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Normalized Yamabe flow

enum class SingularityType { essential, removable };

inline const char* to_string(SingularityType s) {
    return s == SingularityType::essential ? "essential" : "removable";
}

struct Singularity {
    SingularityType type = SingularityType::essential;
    /// Vertex (essential) or tetrahedron (removable).
    int witness = -1;
    double time = 0.0;
    /// Normalized radius or normalized Q at the witness.
    double value = 0.0;
};

enum class YamabeTermination { converged, max_time, max_steps, singular };

inline const char* to_string(YamabeTermination t) {
    switch (t) {
        case YamabeTermination::converged: return "converged";
        case YamabeTermination::max_time: return "max_time";
        case YamabeTermination::max_steps: return "max_steps";
        case YamabeTermination::singular: return "singular";
    }
    return "?";
}

/// dopri5 at relative tolerance 1e-9 leaves a residual floor near 1e-8 at
/// the 3D fixed points; one more digit lets the 1e-9 stop criterion trigger.
inline IntegratorOptions yamabe_integrator_defaults() {
    IntegratorOptions o;
    o.rel_tolerance = 1e-10;
    return o;
}

struct YamabeSpec {
    IntegratorOptions integrator = yamabe_integrator_defaults();
    double max_time = 100.0;
    long max_steps = 1000000;
    /// Stop when max_i |K_i - R_av r_i^2| falls below this.
    double epsilon = 1e-9;
    double essential_radius = 1e-6;
    double removable_q = 1e-8;
    /// Rescale onto the initial V after every step.
    bool project = true;
    /// Integrate the field with reversed sign (ascends S). Used to drive
    /// metrics toward the boundary of the nondegenerate domain.
    bool reverse_time = false;

    void validate() const {
        integrator.validate();
        if (!(max_time > 0 && max_steps > 0 && epsilon > 0 && essential_radius > 0 && removable_q > 0))
            throw InvalidInput("Yamabe flow limits must be positive");
    }
};

struct YamabeTrace {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> radii;
    std::vector<Eigen::VectorXd> curvature;  // R
    std::vector<double> volume;
    std::vector<double> total_curvature;  // S
    /// -1/2 sum (K_i - R_av r_i^2)^2 / r_i at each sample.
    std::vector<double> dS_dt;
    std::vector<double> residual;
    std::vector<double> min_q;  // normalized

    YamabeTermination termination = YamabeTermination::max_time;
    std::optional<Singularity> singularity;
    std::string message;
    long steps = 0;

    std::size_t size() const { return times.size(); }
    PackingMetric final_metric() const { return PackingMetric(radii.back()); }
    double final_residual() const { return residual.back(); }
};

/// max_i |K_i - R_av r_i^2| (scale invariant).
inline double yamabe_residual(const YamabeState& s) {
    return (s.K.array() - s.R_av * s.metric.radii().array().square()).abs().maxCoeff();
}

/// d(ln r)/dt = (R_av - R)/2.
inline Eigen::VectorXd yamabe_field(const Manifold3Complex& c, const PackingMetric& r) {
    const YamabeState s = totals(c, r);
    return 0.5 * (s.R_av - s.R.array()).matrix();
}

/// Closed form of dS/dt along the flow.
inline double yamabe_dS_dt(const YamabeState& s) {
    const Eigen::ArrayXd r = s.metric.radii().array();
    return -0.5 * ((s.K.array() - s.R_av * r.square()).square() / r).sum();
}

namespace detail {

inline std::optional<Singularity> classify_singularity(const Manifold3Complex& c,
                                                       const PackingMetric& r, double t,
                                                       const YamabeSpec& spec, bool force) {
    const double scale = std::cbrt(r.radii().array().cube().sum());
    Eigen::Index vmin = 0;
    const double rmin = r.radii().minCoeff(&vmin) / scale;
    if (rmin < spec.essential_radius)
        return Singularity{SingularityType::essential, static_cast<int>(vmin), t, rmin};
    int tmin = -1;
    const double qmin = min_normalized_q(c, r, &tmin);
    if (qmin < spec.removable_q || force)
        return Singularity{SingularityType::removable, tmin, t, qmin};
    return std::nullopt;
}

}  // namespace detail

inline YamabeTrace yamabe_flow_run(const Manifold3Complex& c, const PackingMetric& r0,
                                   const YamabeSpec& spec = {}) {
    require_matching(c, r0);
    spec.validate();
    const double sign = spec.reverse_time ? -1.0 : 1.0;
    YamabeTrace trace;
    Eigen::VectorXd x = r0.log_radii();
    const double V0 = r0.radii().array().cube().sum();

    auto record = [&](double t, const PackingMetric& r) {
        const YamabeState s = totals(c, r);
        trace.times.push_back(t);
        trace.radii.push_back(r.radii());
        trace.curvature.push_back(s.R);
        trace.volume.push_back(s.V);
        trace.total_curvature.push_back(s.S);
        trace.dS_dt.push_back(sign * yamabe_dS_dt(s));
        const double res = yamabe_residual(s);
        trace.residual.push_back(res);
        trace.min_q.push_back(min_normalized_q(c, r));
        return res;
    };

    LogRadiusIntegrator integ(
        [&](const Eigen::VectorXd& lx) {
            return Eigen::VectorXd(sign * yamabe_field(c, PackingMetric::from_log(lx)));
        },
        spec.integrator,
        [&](const Eigen::VectorXd& lx) {
            try {
                curvature_K3(c, PackingMetric::from_log(lx));
                return true;
            } catch (const DegenerateGeometry&) {
                return false;
            }
        });

    double t = 0.0;
    double dt = spec.integrator.initial_step;
    double res = record(t, r0);
    while (true) {
        const PackingMetric r = PackingMetric::from_log(x);
        if (auto sing = detail::classify_singularity(c, r, t, spec, false)) {
            trace.termination = YamabeTermination::singular;
            trace.singularity = sing;
            break;
        }
        if (res < spec.epsilon) {
            trace.termination = YamabeTermination::converged;
            break;
        }
        if (t >= spec.max_time) {
            trace.termination = YamabeTermination::max_time;
            break;
        }
        if (trace.steps >= spec.max_steps) {
            trace.termination = YamabeTermination::max_steps;
            break;
        }
        try {
            integ.step(x, t, dt, spec.max_time);
        } catch (const StepFailure& e) {
            // every shorter step still leaves the domain: the state sits on
            // its boundary
            trace.termination = YamabeTermination::singular;
            trace.singularity = detail::classify_singularity(c, r, t, spec, true);
            trace.message = e.what();
            break;
        }
        ++trace.steps;
        if (spec.project) {
            x.array() += (std::log(V0) - std::log((3.0 * x.array()).exp().sum())) / 3.0;
            integ.reset();
        }
        res = record(t, PackingMetric::from_log(x));
    }
    return trace;
}

/// Largest relative deviation of V from its first sample.
inline double volume_drift(const YamabeTrace& trace) {
    double worst = 0.0;
    for (double v : trace.volume) worst = std::max(worst, std::abs(v - trace.volume.front()) / trace.volume.front());
    return worst;
}

// ---------------------------------------------------------------------------
// Yamabe invariant estimate

struct YamabeEstimateOptions {
    int starts = 8;
    unsigned seed = 1;
    int max_iterations = 2000;
    /// Stop a descent when max_i |K_i - R_av r_i^2| (at V = 1) is below this.
    double gradient_tolerance = 1e-10;
    /// Random starts draw ln r uniformly from [-spread, spread].
    double spread = 0.15;
    double critical_tolerance = 1e-6;
    /// Smallest normalized radius a descent may visit.
    double min_radius = 1e-3;
};

struct YamabeDescent {
    double initial_Q = 0.0;
    double final_Q = 0.0;
    /// max_i |K_i - R_av r_i^2| where the descent stopped.
    double residual = 0.0;
    bool critical = false;
    PackingMetric metric;
};

struct YamabeEstimate {
    /// Smallest Q found; an upper bound for the combinatorial Yamabe invariant.
    double value = std::numeric_limits<double>::infinity();
    PackingMetric best;
    /// max_i |K_i - R_av r_i^2| at the best metric.
    double gradient_residual = 0.0;
    /// The best metric is a critical point of Q (constant R) within tolerance.
    bool critical = false;
    /// Some descent stopped at the min_radius / safety-margin guard.
    bool hit_boundary = false;
    std::vector<YamabeDescent> descents;
    /// Largest ||K||_{3/2} seen along all descents.
    double max_curvature_norm = 0.0;
};

/// Multistart descent of Q on V = 1. Start 0 is r = 1; other starts are random
/// admissible perturbations of it.
inline YamabeEstimate yamabe_invariant_estimate(const Manifold3Complex& c,
                                                const YamabeEstimateOptions& opt = {}) {
    const int n = c.vertex_count();
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unif(-opt.spread, opt.spread);
    YamabeEstimate est;

    auto normalize = [](Eigen::VectorXd& x) {
        x.array() -= std::log((3.0 * x.array()).exp().sum()) / 3.0;
    };
    // keeps descents away from the domain boundary, where Q may keep
    // decreasing toward a degenerate limit
    auto admissible = [&](const Eigen::VectorXd& x) {
        const PackingMetric r = PackingMetric::from_log(x);
        if (r.radii().minCoeff() / std::cbrt(r.radii().array().cube().sum()) < opt.min_radius)
            return false;
        if (!(min_normalized_q(c, r) > kJacobianSafetyMargin)) return false;
        try {
            curvature_K3(c, r);
        } catch (const DegenerateGeometry&) {
            return false;
        }
        return true;
    };

    for (int s = 0; s < opt.starts; ++s) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        if (s > 0) {
            int tries = 0;
            do {
                for (int i = 0; i < n; ++i) x[i] = unif(rng);
            } while (!admissible(x) && ++tries < 100);
            if (!admissible(x)) continue;
        }
        normalize(x);
        YamabeState st = totals(c, PackingMetric::from_log(x));
        YamabeDescent d;
        d.initial_Q = st.Q;
        double step = 0.1;
        for (int it = 0; it < opt.max_iterations; ++it) {
            est.max_curvature_norm = std::max(est.max_curvature_norm, curvature_norm_3_2(st.K));
            if (yamabe_residual(st) < opt.gradient_tolerance) break;
            // gradient in ln r: r * dQ/dr
            const Eigen::VectorXd g = st.metric.radii().cwiseProduct(yamabe_gradient(st));
            const double g2 = g.squaredNorm();
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
                Eigen::VectorXd trial = x - step * g;
                normalize(trial);
                if (!admissible(trial)) continue;
                const YamabeState ts = totals(c, PackingMetric::from_log(trial));
                if (ts.Q <= st.Q - 1e-4 * step * g2) {
                    x = trial;
                    st = ts;
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                if (yamabe_residual(st) >= opt.critical_tolerance) est.hit_boundary = true;
                break;
            }
            step *= 2.0;
        }
        d.final_Q = st.Q;
        d.residual = yamabe_residual(st);
        d.critical = d.residual < opt.critical_tolerance;
        d.metric = st.metric;
        est.descents.push_back(d);
        if (st.Q < est.value) {
            est.value = st.Q;
            est.best = st.metric;
            est.gradient_residual = yamabe_residual(st);
        }
    }
    est.critical = est.gradient_residual < opt.critical_tolerance;
    return est;
}

}  // namespace packflow
