// Command-line front end: curvature reports, flows, admissibility checks,
// spectra and constant-curvature solves on built-in or JSON meshes.
//
// Exit codes: 0 ok, 2 invalid input, 3 degenerate geometry, 4 not converged,
// 5 singularity, 6 condition violated, 7 enumeration too large.

#include <CLI11.hpp>

#include "packflow/io.hpp"
#include "packflow/packflow.hpp"

#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace packflow;
using io::json;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kDegenerate = 3, kNotConverged = 4, kSingular = 5, kViolated = 6, kTooLarge = 7 };

struct Common {
    std::string mesh;
    std::string metric_path;
    std::string radii;
    std::string random;
    double alpha = 2.0;
    std::string out = ".";
    std::string format = "csv,json";
};

struct FlowOpts {
    std::string family = "ricci_normalized";
    std::string target;
    double t_max = 100.0;
    double eps = 1e-9;
    std::string method = "dopri5";
    bool no_project = false;
    bool reverse = false;
};

struct CheckOpts {
    std::string condition = "thurston";
    std::string subsets;
    std::string x;
    bool table = false;
};

struct SolveOpts {
    std::string method = "newton";
    int starts = 8;
    unsigned seed = 1;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--mesh", c.mesh, "mesh JSON path or builtin:NAME")->required();
    auto* metric = app->add_option("--metric", c.metric_path, "metric JSON {\"radii\": [...]}");
    auto* radii = app->add_option("--radii,--start", c.radii, "comma-separated radii");
    auto* rnd = app->add_option("--random", c.random, "uniform radii A,B,SEED");
    metric->excludes(radii, rnd);
    radii->excludes(rnd);
    app->add_option("--alpha", c.alpha, "curvature exponent alpha");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--format", c.format, "output formats: csv,json");
}

bool wants(const Common& c, const std::string& fmt) {
    std::stringstream ss(c.format);
    std::string item;
    while (std::getline(ss, item, ','))
        if (item == fmt) return true;
    return false;
}

PackingMetric make_metric(const Common& c, int n) {
    if (!c.metric_path.empty()) return io::load_metric(c.metric_path);
    if (!c.radii.empty()) return PackingMetric(io::parse_number_list(c.radii));
    if (!c.random.empty()) {
        const auto v = io::parse_number_list(c.random);
        if (v.size() != 3 || !(v[0] > 0) || !(v[1] >= v[0]) || v[2] < 0)
            throw InvalidInput("--random expects A,B,SEED with 0 < A <= B");
        std::mt19937_64 rng(static_cast<std::uint64_t>(v[2]));
        std::uniform_real_distribution<double> unif(v[0], v[1]);
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) r[i] = unif(rng);
        return PackingMetric(r);
    }
    return PackingMetric::constant(n);
}

void check_valid(const ValidationReport& rep) {
    if (rep.ok()) return;
    std::string msg = "mesh failed validation:";
    for (const auto& p : rep.problems) msg += "\n  " + p;
    throw InvalidInput(msg);
}

std::string out_path(const Common& c, const std::string& name) {
    fs::create_directories(c.out);
    return (fs::path(c.out) / name).string();
}

void write_json(const Common& c, const std::string& name, const json& j) {
    io::write_text(out_path(c, name), j.dump(2) + "\n");
}

json subset_json(const SubsetRecord& r) {
    return json{{"subset", r.subset}, {"lhs", io::number(r.lhs)}, {"rhs", io::number(r.rhs)},
                {"margin", io::number(r.margin)}, {"satisfied", r.satisfied}, {"boundary", r.boundary}};
}

std::vector<std::string> indexed(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t k = 0; k < parts.size(); ++k) s += (k ? "," : "") + parts[k];
    return s;
}

// ---------------------------------------------------------------- curvature

int cmd_curvature(const Common& c) {
    const io::AnyComplex mesh = io::load_mesh(c.mesh);
    if (const auto* s = std::get_if<Surface2Complex>(&mesh)) {
        check_valid(s->validate());
        const PackingMetric r = make_metric(c, s->vertex_count());
        require_matching(*s, r);
        const Eigen::VectorXd K = curvature_K(*s, r);
        const Eigen::VectorXd R = curvature_R(*s, r);
        const Eigen::VectorXd Ra = curvature_alpha(*s, r, c.alpha);
        const int chi = s->euler_characteristic();
        if (wants(c, "csv")) {
            std::string text = "vertex,K,R,R_alpha\n";
            for (int i = 0; i < s->vertex_count(); ++i)
                text += std::to_string(i) + "," + io::csv_row({K[i], R[i], Ra[i]}) + "\n";
            io::write_text(out_path(c, "curvature.csv"), text);
        }
        const Averages av = averages(*s, r, c.alpha);
        json j{{"dim", 2},
               {"vertex_count", s->vertex_count()},
               {"chi", chi},
               {"alpha", c.alpha},
               {"gauss_bonnet_residual", std::abs(K.sum() - 2.0 * std::numbers::pi * chi)},
               {"K_min", K.minCoeff()}, {"K_max", K.maxCoeff()},
               {"R_min", R.minCoeff()}, {"R_max", R.maxCoeff()},
               {"R_alpha_min", Ra.minCoeff()}, {"R_alpha_max", Ra.maxCoeff()},
               {"K_av", av.K_av}, {"R_av", av.R_av}, {"R_alpha_av", av.R_alpha_av},
               {"K", io::vector_json(K)}, {"R", io::vector_json(R)}, {"R_alpha", io::vector_json(Ra)}};
        if (wants(c, "json")) write_json(c, "curvature.json", j);
        return kOk;
    }
    const auto& m = std::get<Manifold3Complex>(mesh);
    check_valid(m.validate());
    const PackingMetric r = make_metric(c, m.vertex_count());
    require_matching(m, r);
    const YamabeState st = totals(m, r);
    if (wants(c, "csv")) {
        std::string text = "vertex,K,R\n";
        for (int i = 0; i < m.vertex_count(); ++i)
            text += std::to_string(i) + "," + io::csv_row({st.K[i], st.R[i]}) + "\n";
        io::write_text(out_path(c, "curvature.csv"), text);
    }
    json j{{"dim", 3},
           {"vertex_count", m.vertex_count()},
           {"chi", m.euler_characteristic()},
           {"K_min", st.K.minCoeff()}, {"K_max", st.K.maxCoeff()},
           {"R_min", st.R.minCoeff()}, {"R_max", st.R.maxCoeff()},
           {"S", st.S}, {"V", st.V}, {"R_av", st.R_av}, {"Q", st.Q},
           {"K_norm_3_2", curvature_norm_3_2(st.K)},
           {"min_normalized_q", min_normalized_q(m, r)},
           {"K", io::vector_json(st.K)}, {"R", io::vector_json(st.R)}};
    if (wants(c, "json")) write_json(c, "curvature.json", j);
    return kOk;
}

// --------------------------------------------------------------------- flow

Eigen::VectorXd load_target(const std::string& path, int n) {
    const json j = io::parse_json(io::read_file(path), path);
    if (!j.is_object() || !j.contains("target") || !j["target"].is_array())
        throw InvalidInput("target JSON needs a 'target' array");
    const auto v = j["target"].get<std::vector<double>>();
    if (static_cast<int>(v.size()) != n) throw InvalidInput("target has the wrong length");
    return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

IntegratorMethod parse_method(const std::string& m) {
    for (auto x : {IntegratorMethod::dopri5, IntegratorMethod::rk4, IntegratorMethod::euler})
        if (m == to_string(x)) return x;
    throw InvalidInput("unknown integrator '" + m + "'");
}

int flow_2d(const Common& c, const FlowOpts& f, const Surface2Complex& s) {
    const PackingMetric r0 = make_metric(c, s.vertex_count());
    require_matching(s, r0);
    FlowSpec spec = FlowSpec::for_family(parse_flow_family(f.family), c.alpha);
    spec.stop.max_time = f.t_max;
    spec.stop.epsilon = f.eps;
    spec.integrator.method = parse_method(f.method);
    spec.project = !f.no_project;
    if (!f.target.empty()) spec.target = load_target(f.target, s.vertex_count());
    const FlowTrace tr = run(spec, s, r0);
    const int n = s.vertex_count();

    if (wants(c, "csv")) {
        std::string text = "t," + join(indexed("r", n)) + "," + join(indexed("R", n)) + ",conserved,F,C\n";
        for (std::size_t k = 0; k < tr.size(); ++k) {
            std::vector<double> row{tr.times[k]};
            for (int i = 0; i < n; ++i) row.push_back(tr.radii[k][i]);
            for (int i = 0; i < n; ++i) row.push_back(tr.curvature[k][i]);
            row.push_back(tr.conserved_values[k]);
            row.push_back(tr.potential.empty() ? std::nan("") : tr.potential[k]);
            row.push_back(tr.calabi.empty() ? std::nan("") : tr.calabi[k]);
            text += io::csv_row(row) + "\n";
        }
        io::write_text(out_path(c, "trace.csv"), text);
    }
    const RateFit fit = fit_exponential_rate(tr.times, tr.residual);
    const char* kinds[] = {"none", "measure", "product"};
    json j{{"dim", 2},
           {"family", to_string(tr.family)},
           {"alpha", tr.alpha},
           {"termination", to_string(tr.termination)},
           {"message", tr.message},
           {"final_time", tr.times.back()},
           {"steps", tr.steps},
           {"samples", tr.size()},
           {"initial_residual", io::number(tr.residual.front())},
           {"final_residual", io::number(tr.final_residual())},
           {"conserved_quantity", kinds[static_cast<int>(tr.conserved)]},
           {"conserved_drift", io::number(conserved_drift(tr))},
           {"potential_max_increase", io::number(max_increase(tr.potential))},
           {"calabi_max_increase", io::number(max_increase(tr.calabi))},
           {"potential_nonincreasing", max_increase(tr.potential) <= 1e-9},
           {"calabi_nonincreasing", max_increase(tr.calabi) <= 1e-9},
           {"rate_fit", {{"slope", io::number(fit.slope)}, {"r_squared", io::number(fit.r_squared)}, {"points", fit.points}}},
           {"final_radii", io::vector_json(tr.radii.back())}};
    if (spec.family == FlowFamily::alpha_ricci_normalized && tr.alpha == 0.0) {
        // the alpha = 0 field against K_av - K evaluated independently
        const PackingMetric rf = tr.final_metric();
        const Eigen::VectorXd K = curvature_K(s, rf);
        const double kav = 2.0 * std::numbers::pi * s.euler_characteristic() / n;
        const Eigen::VectorXd cl = (kav - K.array()).matrix();
        j["chow_luo_field_difference"] = (vector_field(spec, s, rf) - cl).cwiseAbs().maxCoeff();
    }
    if (spec.family == FlowFamily::ricci_normalized || spec.family == FlowFamily::alpha_ricci_normalized) {
        const MaxPrincipleReport mp = max_principle_bounds(s, tr);
        j["max_principle"] = {{"ok", mp.ok()}, {"lower_violations", mp.lower_violations},
                              {"upper_violations", mp.upper_violations}, {"sign_violations", mp.sign_violations}};
    }
    if (wants(c, "json")) write_json(c, "flow.json", j);
    return tr.termination == Termination::converged ? kOk : kNotConverged;
}

int flow_3d(const Common& c, const FlowOpts& f, const Manifold3Complex& m) {
    const PackingMetric r0 = make_metric(c, m.vertex_count());
    require_matching(m, r0);
    YamabeSpec spec;
    spec.max_time = f.t_max;
    spec.epsilon = f.eps;
    spec.integrator.method = parse_method(f.method);
    spec.project = !f.no_project;
    spec.reverse_time = f.reverse;
    const YamabeTrace tr = yamabe_flow_run(m, r0, spec);
    const int n = m.vertex_count();
    if (wants(c, "csv")) {
        std::string text = "t," + join(indexed("r", n)) + "," + join(indexed("R", n)) + ",V,S,dS_dt,min_q\n";
        for (std::size_t k = 0; k < tr.size(); ++k) {
            std::vector<double> row{tr.times[k]};
            for (int i = 0; i < n; ++i) row.push_back(tr.radii[k][i]);
            for (int i = 0; i < n; ++i) row.push_back(tr.curvature[k][i]);
            row.insert(row.end(), {tr.volume[k], tr.total_curvature[k], tr.dS_dt[k], tr.min_q[k]});
            text += io::csv_row(row) + "\n";
        }
        io::write_text(out_path(c, "trace.csv"), text);
    }
    const RateFit fit = fit_exponential_rate(tr.times, tr.residual);
    json j{{"dim", 3},
           {"family", "yamabe_normalized"},
           {"reverse_time", spec.reverse_time},
           {"termination", to_string(tr.termination)},
           {"message", tr.message},
           {"final_time", tr.times.back()},
           {"steps", tr.steps},
           {"initial_residual", io::number(tr.residual.front())},
           {"final_residual", io::number(tr.final_residual())},
           {"volume_drift", io::number(volume_drift(tr))},
           {"total_curvature_max_increase", io::number(max_increase(tr.total_curvature))},
           {"total_curvature_nonincreasing", max_increase(tr.total_curvature) <= 1e-9},
           {"rate_fit", {{"slope", io::number(fit.slope)}, {"r_squared", io::number(fit.r_squared)}, {"points", fit.points}}},
           {"final_radii", io::vector_json(tr.radii.back())}};
    if (tr.singularity) {
        const Singularity& sg = *tr.singularity;
        json sj{{"type", to_string(sg.type)},
                {"witness", sg.witness},
                {"witness_kind", sg.type == SingularityType::essential ? "vertex" : "tetrahedron"},
                {"time", sg.time},
                {"value", io::number(sg.value)}};
        if (sg.type == SingularityType::removable && sg.witness >= 0) sj["tetrahedron"] = m.tetrahedron(sg.witness);
        j["singularity"] = sj;
        if (wants(c, "json")) write_json(c, "singularity.json", sj);
    }
    if (wants(c, "json")) write_json(c, "flow.json", j);
    if (tr.termination == YamabeTermination::singular) return kSingular;
    return tr.termination == YamabeTermination::converged ? kOk : kNotConverged;
}

int cmd_flow(const Common& c, const FlowOpts& f) {
    const io::AnyComplex mesh = io::load_mesh(c.mesh);
    if (const auto* s = std::get_if<Surface2Complex>(&mesh)) {
        check_valid(s->validate());
        return flow_2d(c, f, *s);
    }
    const auto& m = std::get<Manifold3Complex>(mesh);
    check_valid(m.validate());
    return flow_3d(c, f, m);
}

// -------------------------------------------------------------------- check

std::vector<VertexSubset> load_subsets(const std::string& path, int n) {
    const json j = io::parse_json(io::read_file(path), path);
    if (!j.is_object() || !j.contains("subsets") || !j["subsets"].is_array())
        throw InvalidInput("subsets JSON needs a 'subsets' array of vertex lists");
    std::vector<VertexSubset> out;
    for (const auto& s : j["subsets"]) {
        if (!s.is_array()) throw InvalidInput("each subset must be an array of vertex indices");
        out.emplace_back(n, s.get<std::vector<int>>());
    }
    return out;
}

int cmd_check(const Common& c, const CheckOpts& k) {
    const io::AnyComplex mesh = io::load_mesh(c.mesh);
    const auto* s = std::get_if<Surface2Complex>(&mesh);
    if (!s) throw InvalidInput("check needs a 2-dimensional mesh");
    check_valid(s->validate());
    const Condition cond = parse_condition(k.condition);
    AdmissibilityOptions opt;
    opt.keep_records = k.table;
    if (!k.subsets.empty()) opt.subsets = load_subsets(k.subsets, s->vertex_count());

    AdmissibilityReport rep;
    switch (cond) {
        case Condition::thurston: rep = thurston_condition(*s, opt); break;
        case Condition::sphere: rep = sphere_condition(*s, opt); break;
        case Condition::metric: {
            const PackingMetric r = make_metric(c, s->vertex_count());
            rep = metric_condition(*s, r, c.alpha, opt);
            break;
        }
        case Condition::y: {
            Eigen::VectorXd x;
            if (!k.x.empty()) {
                const auto v = io::parse_number_list(k.x);
                if (static_cast<int>(v.size()) != s->vertex_count()) throw InvalidInput("--x has the wrong length");
                x = Eigen::Map<const Eigen::VectorXd>(v.data(), s->vertex_count());
            } else {
                x = curvature_K(*s, make_metric(c, s->vertex_count()));
            }
            rep = y_membership(*s, x, opt);
            break;
        }
    }
    json j{{"condition", to_string(rep.condition)},
           {"verdict", rep.verdict},
           {"mode", rep.mode == EnumerationMode::exhaustive ? "exhaustive" : "supplied"},
           {"subsets_checked", rep.subsets_checked},
           {"violations", rep.violations},
           {"reason", rep.reason}};
    if (rep.witness) j["witness"] = subset_json(*rep.witness);
    if (rep.worst) j["worst"] = subset_json(*rep.worst);
    if (k.table) {
        j["table"] = json::array();
        for (const auto& r : rep.records) j["table"].push_back(subset_json(r));
    }
    if (wants(c, "json")) write_json(c, "check.json", j);
    return rep.verdict ? kOk : kViolated;
}

// ----------------------------------------------------------------- spectrum

int cmd_spectrum(const Common& c) {
    const io::AnyComplex mesh = io::load_mesh(c.mesh);
    if (const auto* s = std::get_if<Surface2Complex>(&mesh)) {
        check_valid(s->validate());
        const PackingMetric r = make_metric(c, s->vertex_count());
        require_matching(*s, r);
        const SpectrumReport rep = spectrum(*s, r);
        json j{{"dim", 2},
               {"operator", "Sigma^-1/2 L Sigma^-1/2 (similar to -Laplacian)"},
               {"eigenvalues", io::vector_json(rep.eigenvalues)},
               {"lambda1", io::number(rep.lambda1)},
               {"kernel_eigenvalue", rep.kernel_eigenvalue},
               {"kernel_residual", std::abs(rep.kernel_eigenvalue)},
               {"kernel_dimension", rep.kernel_dimension},
               {"kernel_alignment_error", rep.kernel_alignment_error}};
        if (wants(c, "json")) write_json(c, "spectrum.json", j);
        if (rep.kernel_dimension != 1 || !std::isfinite(rep.lambda1)) return kNotConverged;
        return kOk;
    }
    const auto& m = std::get<Manifold3Complex>(mesh);
    check_valid(m.validate());
    const PackingMetric r = make_metric(c, m.vertex_count());
    require_matching(m, r);
    const Eigen::MatrixXd J = jacobian3d(m, r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (J + J.transpose()));
    if (solver.info() != Eigen::Success) throw SpectralFailure("symmetric eigensolver did not converge");
    const Eigen::VectorXd ev = solver.eigenvalues();
    json j{{"dim", 3},
           {"operator", "dK/dr"},
           {"eigenvalues", io::vector_json(ev)},
           {"kernel_residual", (J * r.radii()).norm() / (J.norm() * r.radii().norm())},
           {"asymmetry", (J - J.transpose()).cwiseAbs().maxCoeff()}};
    if (wants(c, "json")) write_json(c, "spectrum.json", j);
    return kOk;
}

// -------------------------------------------------------------------- solve

int cmd_solve(const Common& c, const SolveOpts& o) {
    const io::AnyComplex mesh = io::load_mesh(c.mesh);
    if (const auto* s = std::get_if<Surface2Complex>(&mesh)) {
        check_valid(s->validate());
        const PackingMetric r0 = make_metric(c, s->vertex_count());
        require_matching(*s, r0);
        SolveMethod method;
        if (o.method == "newton") method = SolveMethod::newton;
        else if (o.method == "flow") method = SolveMethod::flow;
        else throw InvalidInput("--method must be newton or flow");
        const ConstantCurvatureResult res = find_constant_curvature(*s, c.alpha, r0, method);
        const Eigen::VectorXd ratios = res.metric.radii() / res.metric[0];
        json j{{"dim", 2},
               {"method", o.method},
               {"alpha", c.alpha},
               {"radii", io::vector_json(res.metric.radii())},
               {"ratios_to_vertex0", io::vector_json(ratios)},
               {"residual", res.residual},
               {"iterations", res.iterations},
               {"R_alpha", io::vector_json(curvature_alpha(*s, res.metric, c.alpha))}};
        if (wants(c, "json")) write_json(c, "solution.json", j);
        return kOk;
    }
    const auto& m = std::get<Manifold3Complex>(mesh);
    check_valid(m.validate());
    YamabeEstimateOptions eo;
    eo.starts = o.starts;
    eo.seed = o.seed;
    const YamabeEstimate est = yamabe_invariant_estimate(m, eo);
    json d = json::array();
    for (const auto& x : est.descents)
        d.push_back({{"initial_Q", x.initial_Q}, {"final_Q", x.final_Q}, {"residual", x.residual}, {"critical", x.critical}});
    json j{{"dim", 3},
           {"estimate", est.value},
           {"note", "smallest Q found over the multistart descents; an upper bound, not the infimum"},
           {"radii", io::vector_json(est.best.radii())},
           {"gradient_residual", est.gradient_residual},
           {"critical", est.critical},
           {"hit_boundary", est.hit_boundary},
           {"max_curvature_norm_3_2", est.max_curvature_norm},
           {"descents", d}};
    if (wants(c, "json")) write_json(c, "solution.json", j);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete curvature, flows and admissibility on circle and sphere packings"};
    app.require_subcommand(1);
    Common common;
    FlowOpts flow;
    CheckOpts check;
    SolveOpts solve;

    auto* curv = app.add_subcommand("curvature", "curvature report for a metric");
    add_common(curv, common);

    auto* fl = app.add_subcommand("flow", "integrate a curvature flow (Yamabe flow on 3D meshes)");
    add_common(fl, common);
    fl->add_option("--family", flow.family, "flow family, e.g. ricci-normalized, alpha-calabi");
    fl->add_option("--target", flow.target, "target curvature JSON {\"target\": [...]}");
    fl->add_option("--t-max", flow.t_max, "maximum flow time");
    fl->add_option("--eps", flow.eps, "convergence threshold on the residual");
    fl->add_option("--method", flow.method, "dopri5, rk4 or euler");
    fl->add_flag("--no-project", flow.no_project, "do not rescale onto the conserved level set");
    fl->add_flag("--reverse", flow.reverse, "3D only: integrate the Yamabe field backwards");

    auto* ck = app.add_subcommand("check", "admissibility conditions over vertex subsets");
    add_common(ck, common);
    ck->add_option("--condition", check.condition, "thurston, y, metric or sphere");
    ck->add_option("--subsets", check.subsets, "JSON {\"subsets\": [[...], ...]} instead of enumeration");
    ck->add_option("--x", check.x, "curvature vector for the y condition (default K of the metric)");
    ck->add_flag("--table", check.table, "include every subset in the report");

    auto* sp = app.add_subcommand("spectrum", "spectrum of the Laplacian");
    add_common(sp, common);

    auto* so = app.add_subcommand("solve", "constant-curvature metric (Yamabe estimate on 3D meshes)");
    add_common(so, common);
    so->add_option("--method", solve.method, "newton or flow");
    so->add_option("--starts", solve.starts, "3D: number of descents");
    so->add_option("--seed", solve.seed, "3D: random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*curv) return cmd_curvature(common);
        if (*fl) return cmd_flow(common, flow);
        if (*ck) return cmd_check(common, check);
        if (*sp) return cmd_spectrum(common);
        if (*so) return cmd_solve(common, solve);
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kInvalid;
    } catch (const NotApplicable& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return kInvalid;
    } catch (const DegenerateGeometry& e) {
        std::cerr << "degenerate geometry: " << e.what() << "\n";
        return kDegenerate;
    } catch (const EnumerationTooLarge& e) {
        std::cerr << "enumeration too large: " << e.what() << "\n";
        return kTooLarge;
    } catch (const NoConvergence& e) {
        std::cerr << "no convergence: " << e.what() << " (residual " << e.residual() << ")\n";
        return kNotConverged;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNotConverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
    return kInvalid;
}
