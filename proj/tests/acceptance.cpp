// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "oracles.hpp"
#include "packflow/admissibility.hpp"
#include "packflow/flows2d.hpp"
#include "packflow/meshes.hpp"
#include "packflow/operators2d.hpp"
#include "packflow/packing3d.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace packflow;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

oracle::Faces faces_of(const Surface2Complex& c) {
    oracle::Faces f;
    for (const auto& t : c.faces()) f.push_back({t[0], t[1], t[2]});
    return f;
}

oracle::EdgeWeights weights_of(const Surface2Complex& c) {
    oracle::EdgeWeights w;
    for (int e = 0; e < c.edge_count(); ++e) w[oracle::key(c.edge(e)[0], c.edge(e)[1])] = c.weight(e);
    return w;
}

Surface2Complex with_random_weights(const Surface2Complex& c, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, kPi / 2);
    std::vector<double> w(c.edge_count());
    for (double& x : w) x = u(rng);
    return Surface2Complex(c.vertex_count(), c.edges(), w, c.faces());
}

double spread(const Eigen::VectorXd& v) { return v.maxCoeff() - v.minCoeff(); }

// 1. Unit metric on the tetrahedron sphere
void check_unit_tetrahedron(Verdict& v) {
    const auto t0 = Clock::now();
    const auto c = meshes::tetrahedron();
    const PackingMetric r = PackingMetric::constant(4);
    const Eigen::VectorXd K = curvature_K(c, r);
    const Eigen::VectorXd R = curvature_R(c, r);
    const double secs = seconds_since(t0);
    const double err = std::max((K.array() - kPi).abs().maxCoeff(), (R.array() - kPi).abs().maxCoeff());
    v.require(err < 1e-12, "K = R = pi");
    v.require(secs < 1e-3, "runtime < 1 ms");
    v.detail << "max |K - pi|, |R - pi| = " << err << ", " << secs * 1e3 << " ms";
}

// 2. Second constant-curvature metric (1, x, x, x)
void check_second_constant_metric(Verdict& v) {
    const auto t0 = Clock::now();
    const auto c = meshes::tetrahedron();
    const auto res = find_constant_curvature(c, 2.0, PackingMetric(std::vector<double>{1, 6, 6, 6}), SolveMethod::newton);
    const auto one = find_constant_curvature(c, 2.0, PackingMetric(std::vector<double>{1, 1.1, 1.1, 1.1}), SolveMethod::newton);
    const double secs = seconds_since(t0);
    const double x = res.metric[1] / res.metric[0];
    const Eigen::VectorXd R = curvature_R(c, res.metric);
    const double rel_spread = spread(R) / R.cwiseAbs().maxCoeff();
    // independent root of K_0 = K_1 / x^2 from the planar-embedding oracle
    const auto g = [&](double y) {
        const Eigen::VectorXd K = oracle::curvature_2d(4, faces_of(c), {}, Eigen::VectorXd{{1, y, y, y}});
        return K[0] - K[1] / (y * y);
    };
    const double x_oracle = oracle::bisect(g, 3.0, 10.0);
    const double x_one = one.metric[1] / one.metric[0];
    v.require(std::abs(x - 5.9487) <= 5e-5, "x = 5.9487 +- 5e-5");
    v.require(std::abs(x - x_oracle) < 1e-8, "agrees with bisection oracle");
    v.require(rel_spread < 1e-9, "R constant");
    v.require(std::abs(x_one - 1.0) < 1e-9 && std::abs(oracle::bisect(g, 0.5, 2.0) - 1.0) < 1e-9, "x = 1 is a root");
    v.require(secs < 1.0, "runtime < 1 s");
    char buf[160];
    std::snprintf(buf, sizeof buf, "x = %.10f (oracle %.10f), R spread %.1e, other root %.12f, %.1f ms", x,
                  x_oracle, rel_spread, x_one, secs * 1e3);
    v.detail << buf;
}

// 3. Hessian of the Ricci potential at the unit tetrahedron metric
void check_tetrahedron_hessian(Verdict& v) {
    const auto c = meshes::tetrahedron();
    const Eigen::MatrixXd H =
        hessian_ricci_potential(c, PackingMetric::constant(4), 2.0, {}, LogCoordinate::log_r_squared).matrix;
    const Eigen::MatrixXd expect = (std::sqrt(3.0) / 6.0 - kPi / 4.0) *
                                   (4.0 * Eigen::MatrixXd::Identity(4, 4) - Eigen::MatrixXd::Ones(4, 4));
    const double err = (H - expect).cwiseAbs().maxCoeff();
    Eigen::MatrixXd P(4, 3);
    P << 1, 1, 1, -1, 0, 0, 0, -1, 0, 0, 0, -1;
    const Eigen::MatrixXd Q = P.householderQr().householderQ() * Eigen::MatrixXd::Identity(4, 3);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.transpose() * H * Q);
    const Eigen::Vector3d ev = es.eigenvalues();
    v.require(err < 1e-9, "entrywise closed form");
    v.require(ev.maxCoeff() < 0.0, "negative definite on complement of 1");
    v.detail << "entry error " << err << ", eigenvalues on 1-perp " << ev.transpose();
}

// 4. The unit tetrahedron metric repels the normalized Ricci flow
void check_source_behaviour(Verdict& v) {
    Eigen::VectorXd d(4);
    d << 1, -1, 0.5, -0.5;
    d.normalize();
    Eigen::VectorXd r = Eigen::VectorXd::Ones(4) + 1e-3 * d;
    r *= 2.0 / r.norm();  // back onto ||r||^2 = 4
    FlowSpec spec = FlowSpec::for_family(FlowFamily::ricci_normalized);
    spec.stop.max_time = 1.0;
    const FlowTrace tr = run(spec, meshes::tetrahedron(), PackingMetric(r));
    int decreases = 0;
    for (std::size_t k = 1; k < tr.size(); ++k) decreases += tr.residual[k] < tr.residual[k - 1] * (1 - 1e-9);
    const double dist0 = (tr.radii.front() - Eigen::VectorXd::Ones(4)).norm();
    const double dist1 = (tr.radii.back() - Eigen::VectorXd::Ones(4)).norm();
    v.require(tr.termination == Termination::max_time, "does not converge");
    v.require(tr.final_residual() > tr.residual.front(), "residual grows");
    v.require(decreases == 0, "residual never decreases");
    v.require(dist1 > dist0, "distance to 1 grows");
    v.detail << "residual " << tr.residual.front() << " -> " << tr.final_residual() << ", distance " << dist0
             << " -> " << dist1 << " over t = 1";
}

// 5. Gauss-Bonnet
void check_gauss_bonnet(Verdict& v) {
    std::mt19937_64 rng(5);
    int cases = 0, complexes = 0;
    double worst = 0.0;
    for (const auto& name : meshes::surface_names()) {
        const auto base = meshes::surface(name);
        ++complexes;
        for (int trial = 0; trial < 40; ++trial) {
            const auto c = trial % 2 ? with_random_weights(base, rng) : base;
            const PackingMetric r(oracle::random_radii(c.vertex_count(), rng, 0.05, 5.0));
            worst = std::max(worst, std::abs(curvature_K(c, r).sum() - 2 * kPi * c.euler_characteristic()));
            ++cases;
        }
    }
    v.require(worst < 1e-10, "sum K = 2 pi chi");
    v.require(cases >= 100 && complexes >= 4, "coverage");
    v.detail << cases << " metrics on " << complexes << " complexes, worst residual " << worst;
}

// 6. Jacobian against finite differences, and its structure
void check_jacobian(Verdict& v) {
    std::mt19937_64 rng(6);
    int cases = 0;
    double worst_fd = 0.0, worst_sym = 0.0, worst_kernel = 0.0;
    bool structure = true;
    for (const auto& name : meshes::surface_names()) {
        for (int trial = 0; trial < 24; ++trial) {
            const auto c = trial % 2 ? with_random_weights(meshes::surface(name), rng) : meshes::surface(name);
            const int n = c.vertex_count();
            const Eigen::VectorXd r = oracle::random_radii(n, rng, 0.3, 3.0);
            const Eigen::MatrixXd L = jacobian_logr(c, PackingMetric(r)).matrix;
            const auto faces = faces_of(c);
            const auto w = weights_of(c);
            const auto K = [&](const Eigen::VectorXd& u) {
                return oracle::curvature_2d(n, faces, w, Eigen::VectorXd(u.array().exp()));
            };
            const Eigen::MatrixXd fd = oracle::fd_jacobian(K, Eigen::VectorXd(r.array().log()), 1e-5);
            worst_fd = std::max(worst_fd, (L - fd).norm() / fd.norm());
            const double scale = L.cwiseAbs().maxCoeff();
            worst_sym = std::max(worst_sym, (L - L.transpose()).cwiseAbs().maxCoeff() / scale);
            worst_kernel = std::max(worst_kernel, (L * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() / scale);
            const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(L).eigenvalues();
            structure &= ev[0] > -1e-10 * scale && std::abs(ev[0]) < 1e-10 * scale && ev[1] > 1e-8 * scale;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) structure &= c.find_edge(i, j) >= 0 ? L(i, j) < 0.0 : L(i, j) == 0.0;
            ++cases;
        }
    }
    v.require(cases >= 100, ">= 100 cases");
    v.require(worst_fd <= 1e-6, "FD relative error <= 1e-6");
    v.require(worst_sym < 1e-12 && worst_kernel < 1e-12, "symmetric with kernel 1");
    v.require(structure, "PSD, rank N-1, negative neighbour entries");
    v.detail << cases << " cases, worst FD error " << worst_fd << ", asymmetry " << worst_sym;
}

// 7. Convergence on the genus-2 mesh
void check_genus2_convergence(Verdict& v) {
    const auto c = meshes::genus2();
    int min_degree = 1 << 30;
    bool all_negative = true;
    for (int i = 0; i < c.vertex_count(); ++i) min_degree = std::min(min_degree, c.degree(i));
    const Eigen::VectorXd K0 = curvature_K(c, PackingMetric::constant(11));
    all_negative = K0.maxCoeff() < 0.0;
    const auto t0 = Clock::now();
    const FlowTrace tr = run(FlowSpec::for_family(FlowFamily::ricci_normalized), c, PackingMetric::constant(11));
    const double secs = seconds_since(t0);
    const RateFit fit = fit_exponential_rate(tr.times, tr.residual);
    v.require(min_degree >= 7 && all_negative, "mesh has min degree 7 and K < 0");
    v.require(tr.termination == Termination::converged && tr.final_residual() < 1e-9, "converged");
    v.require(fit.slope < 0.0 && fit.r_squared > 0.99, "exponential rate");
    v.require(secs < 10.0, "runtime < 10 s");
    v.detail << "residual " << tr.final_residual() << " at t = " << tr.times.back() << ", slope " << fit.slope
             << ", R^2 " << fit.r_squared << ", " << secs << " s";
}

// 8. Maximum-principle envelopes
void check_max_principle(Verdict& v) {
    std::mt19937_64 rng(8);
    struct Case {
        std::string label;
        Surface2Complex c;
        PackingMetric r0;
        double alpha;
    };
    std::vector<Case> cases;
    cases.push_back({"chi<0, R<0", meshes::genus2(), PackingMetric::constant(11), 2.0});
    cases.push_back({"chi<0 random", meshes::genus2(), PackingMetric(oracle::random_radii(11, rng, 0.5, 2.0)), 2.0});
    cases.push_back({"chi=0", meshes::flat_torus(), PackingMetric(oracle::random_radii(16, rng)), 2.0});
    cases.push_back({"chi<0 alpha=1", meshes::genus2(), PackingMetric(oracle::random_radii(11, rng, 0.5, 2.0)), 1.0});
    cases.push_back({"chi<0 alpha=0.5", meshes::genus2(), PackingMetric(oracle::random_radii(11, rng, 0.5, 2.0)), 0.5});
    int samples = 0;
    for (const auto& k : cases) {
        const FlowFamily f = k.alpha == 2.0 ? FlowFamily::ricci_normalized : FlowFamily::alpha_ricci_normalized;
        const FlowTrace tr = run(FlowSpec::for_family(f, k.alpha), k.c, k.r0);
        const MaxPrincipleReport rep = max_principle_bounds(k.c, tr);
        samples += static_cast<int>(rep.samples.size());
        v.require(rep.lower_violations + rep.upper_violations == 0, k.label + " envelope");
        v.require(rep.sign_violations == 0, k.label + " signs");
        if (k.label == "chi<0, R<0") v.require(rep.initially_nonpositive, "initial R <= 0");
    }
    v.detail << cases.size() << " runs, " << samples << " samples checked";
}

// 9. Conservation and monotonicity in 2D and 3D
void check_conservation(Verdict& v) {
    std::mt19937_64 rng(9);
    const auto c = meshes::genus2();
    const PackingMetric r0(oracle::random_radii(11, rng, 0.6, 1.6));
    struct Case {
        FlowFamily family;
        double alpha;
    };
    const std::vector<Case> cases{{FlowFamily::ricci_normalized, 2.0},
                                  {FlowFamily::calabi, 2.0},
                                  {FlowFamily::calabi_modified, 2.0},
                                  {FlowFamily::alpha_ricci_normalized, 0.0},
                                  {FlowFamily::alpha_ricci_normalized, 1.0},
                                  {FlowFamily::alpha_ricci_normalized, -1.0},
                                  {FlowFamily::alpha_calabi, 1.0},
                                  {FlowFamily::alpha_calabi, 0.0},
                                  {FlowFamily::alpha_calabi_modified, 1.0},
                                  {FlowFamily::alpha_calabi_modified, 0.0}};
    double worst_drift = 0.0, worst_F = -1e300, worst_C = -1e300;
    for (const auto& k : cases) {
        FlowSpec spec = FlowSpec::for_family(k.family, k.alpha);
        spec.project = false;
        spec.stop.max_time = 2.0;
        const FlowTrace tr = run(spec, c, r0);
        worst_drift = std::max(worst_drift, conserved_drift(tr) / std::max(1.0, tr.times.back()));
        worst_F = std::max(worst_F, max_increase(tr.potential));
        if (k.family == FlowFamily::calabi_modified || k.family == FlowFamily::alpha_calabi_modified)
            worst_C = std::max(worst_C, max_increase(tr.calabi));
    }
    v.require(worst_drift <= 1e-7, "2D drift per unit time");
    v.require(worst_F <= 1e-9 && worst_C <= 1e-9, "F and C nonincreasing");

    const auto m = meshes::five_cell();
    YamabeSpec ys;
    ys.project = false;
    ys.max_time = 5.0;
    const YamabeTrace yt = yamabe_flow_run(m, PackingMetric(std::vector<double>{0.6, 1.3, 1, 1, 1}), ys);
    double s_increase = -1e300;
    for (std::size_t k = 1; k < yt.size(); ++k)
        s_increase = std::max(s_increase, yt.total_curvature[k] - yt.total_curvature[k - 1]);
    const double v_drift = volume_drift(yt) / yt.times.back();
    v.require(v_drift <= 1e-7, "3D volume drift");
    v.require(s_increase <= 1e-9, "S nonincreasing");

    // S differences against Simpson's rule on the closed-form dS/dt
    YamabeSpec fs;
    fs.integrator.method = IntegratorMethod::rk4;
    fs.integrator.initial_step = 2.5e-4;
    fs.max_time = 0.1;
    fs.project = false;
    const YamabeTrace ft = yamabe_flow_run(m, PackingMetric(std::vector<double>{1, 1, 1, 1, 0.5}), fs);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 1; k + 1 < ft.size(); ++k) {
        const double h = 0.5 * (ft.times[k + 1] - ft.times[k - 1]);
        const double simpson = h / 3 * (ft.dS_dt[k - 1] + 4 * ft.dS_dt[k] + ft.dS_dt[k + 1]);
        worst = std::max(worst, std::abs(ft.total_curvature[k + 1] - ft.total_curvature[k - 1] - simpson) / (2 * h));
        scale = std::max(scale, std::abs(ft.dS_dt[k]));
    }
    v.require(worst < 1e-7 * scale, "dS/dt closed form");
    v.detail << "2D drift/t " << worst_drift << ", max F/C increase " << std::max(worst_F, worst_C)
             << "; 3D V drift/t " << v_drift << ", max S increase " << s_increase << ", dS/dt rel error "
             << worst / scale;
}

// 10. Alpha families at alpha = 2 and alpha = 0
void check_family_equivalences(Verdict& v) {
    std::mt19937_64 rng(10);
    const auto c = meshes::genus2();
    const Eigen::VectorXd target = oracle::random_radii(11, rng, -0.4, -0.1);
    const Eigen::VectorXd x0 = Eigen::VectorXd(oracle::random_radii(11, rng, 0.7, 1.4).array().log());
    const double h = 1e-3;
    double worst = 0.0;
    for (FlowFamily f : {FlowFamily::ricci, FlowFamily::ricci_normalized, FlowFamily::ricci_prescribed,
                         FlowFamily::calabi, FlowFamily::calabi_modified}) {
        const AlphaCounterpart cp = alpha_counterpart(f);
        FlowSpec a = FlowSpec::for_family(cp.family, 2.0);
        FlowSpec b = FlowSpec::for_family(f);
        a.integrator.method = b.integrator.method = IntegratorMethod::rk4;
        if (is_prescribed(f)) a.target = b.target = target;
        FlowState sa, sb;
        sa.log_r = sb.log_r = x0;
        for (int k = 0; k < 200; ++k) {
            sa.dt = h;
            sb.dt = cp.time_factor * h;
            sa = step(a, c, sa);
            sb = step(b, c, sb);
            worst = std::max(worst, (sa.log_r - sb.log_r).cwiseAbs().maxCoeff());
        }
    }
    // alpha = 0 field against K_av - K from the embedding oracle
    const FlowSpec z = FlowSpec::for_family(FlowFamily::alpha_ricci_normalized, 0.0);
    double worst_cl = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::VectorXd r = oracle::random_radii(11, rng, 0.3, 3.0);
        const Eigen::VectorXd K = oracle::curvature_2d(11, faces_of(c), {}, r);
        const Eigen::VectorXd cl = (2 * kPi * c.euler_characteristic() / 11.0 - K.array()).matrix();
        worst_cl = std::max(worst_cl, (vector_field(z, c, PackingMetric(r)) - cl).cwiseAbs().maxCoeff());
    }
    v.require(worst <= 1e-12, "alpha = 2 step for step");
    v.require(worst_cl < 1e-10, "alpha = 0 field");
    v.detail << "5 families x 200 RK4 steps, worst ln r gap " << worst << "; alpha = 0 field gap " << worst_cl;
}

// 11. Sphere packings on 3-manifolds
void check_geometry3d(Verdict& v) {
    const auto c = meshes::five_cell();
    const double omega = 3 * std::acos(1.0 / 3.0) - kPi;
    const auto ref = oracle::tet_solid_angles({1, 1, 1, 1});
    double angle_err = 0.0;
    for (int t = 0; t < c.tetrahedron_count(); ++t) {
        const auto a = tet_geometry(tet_radii(c, PackingMetric::constant(5), t)).solid_angles;
        for (int k = 0; k < 4; ++k) angle_err = std::max({angle_err, std::abs(a[k] - omega), std::abs(a[k] - ref[k])});
    }
    const Eigen::VectorXd K1 = curvature_K3(c, PackingMetric::constant(5));
    const double k_err = (K1.array() - (4 * kPi - 4 * omega)).abs().maxCoeff();
    v.require(angle_err < 1e-9, "solid angle");
    v.require(k_err < 1e-9, "K = 4 pi - 4 omega");

    std::mt19937_64 rng(11);
    double grad_err = 0.0, kernel = 0.0, min_ev = 1e300, q_err = 0.0, holder = -1e300;
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (const auto& name : meshes::manifold_names()) {
        const auto m = meshes::manifold(name);
        const int n = m.vertex_count();
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd r = oracle::random_radii(n, rng, 0.7, 1.4);
            const YamabeState s = totals(m, PackingMetric(r));
            if (trial < 5) {
                const auto S = [&](const Eigen::VectorXd& x) {
                    return Eigen::VectorXd::Constant(1, totals(m, PackingMetric(x)).S);
                };
                const Eigen::VectorXd g = oracle::fd_jacobian(S, r, 1e-6).row(0).transpose();
                grad_err = std::max(grad_err, (g - s.K).cwiseAbs().maxCoeff() / s.K.cwiseAbs().maxCoeff());
                const Eigen::MatrixXd L = jacobian3d(m, PackingMetric(r));
                const double sc = L.cwiseAbs().maxCoeff();
                kernel = std::max(kernel, (L * r).norm() / (sc * r.norm()));
                const Eigen::VectorXd ev =
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (L + L.transpose())).eigenvalues();
                min_ev = std::min(min_ev, ev[0] / sc);
            }
            q_err = std::max(q_err, std::abs(totals(m, PackingMetric(r).scaled(scale(rng))).Q - s.Q));
            holder = std::max(holder, std::abs(s.Q) - curvature_norm_3_2(s.K));
        }
    }
    v.require(grad_err <= 1e-6, "grad S = K");
    v.require(kernel < 1e-7 && min_ev > -1e-7, "Lambda PSD with kernel r");
    v.require(q_err <= 1e-12, "Q scale invariant");
    v.require(holder <= 1e-12, "|Q| <= ||K||_3/2");
    v.detail << "solid angle error " << angle_err << ", grad S error " << grad_err << ", |Lambda r| " << kernel
             << ", min eigenvalue " << min_ev << ", Q scaling error " << q_err;
}

// 12. Admissibility
void check_admissibility(Verdict& v) {
    const auto rep = sphere_condition(meshes::tetrahedron());
    v.require(!rep.verdict, "sphere condition fails");
    v.require(rep.witness && rep.witness->subset.size() == 2 && std::abs(rep.witness->margin) <= 1e-12 &&
                  rep.witness->boundary,
              "boundary witness of size 2");
    std::mt19937_64 rng(12);
    const std::vector<std::string> names{"tetrahedron", "octahedron", "icosahedron", "genus2"};
    int members = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto base = meshes::surface(names[trial % names.size()]);
        const auto c = trial % 2 ? with_random_weights(base, rng) : base;
        const PackingMetric r(oracle::random_radii(c.vertex_count(), rng, 0.05, 5.0));
        members += y_membership(c, curvature_K(c, r)).verdict;
    }
    v.require(members == 1000, "K(r) in Y");
    if (rep.witness) v.detail << "witness {" << rep.witness->subset[0] << "," << rep.witness->subset[1] << "} margin " << rep.witness->margin << "; ";
    v.detail << members << "/1000 curvature vectors in Y";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"unit metric on tetrahedron sphere", check_unit_tetrahedron},
        {"second constant-curvature metric", check_second_constant_metric},
        {"Hessian at the unit metric", check_tetrahedron_hessian},
        {"unit metric repels the flow", check_source_behaviour},
        {"Gauss-Bonnet", check_gauss_bonnet},
        {"Jacobian against finite differences", check_jacobian},
        {"genus-2 convergence", check_genus2_convergence},
        {"maximum-principle envelopes", check_max_principle},
        {"conservation and monotonicity", check_conservation},
        {"family equivalences", check_family_equivalences},
        {"3D geometry", check_geometry3d},
        {"admissibility", check_admissibility},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            criteria[k].second(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        failures += !v.pass;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), v.detail.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
