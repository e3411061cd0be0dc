#pragma once

// Ricci, Calabi and alpha-curvature flows on circle packing metrics, with
// conserved-quantity, energy and maximum-principle monitors.
//
// Every field is returned as d(ln r)/dt.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "packflow/error.hpp"
#include "packflow/integrator.hpp"
#include "packflow/mesh.hpp"
#include "packflow/operators2d.hpp"
#include "packflow/packing2d.hpp"

namespace packflow {

enum class FlowFamily {
    ricci,
    ricci_normalized,
    ricci_prescribed,
    calabi,
    calabi_modified,
    alpha_ricci,
    alpha_ricci_normalized,
    alpha_calabi,
    alpha_calabi_modified,
    alpha_prescribed,
};

inline const std::vector<FlowFamily>& all_flow_families() {
    static const std::vector<FlowFamily> all{
        FlowFamily::ricci,           FlowFamily::ricci_normalized,     FlowFamily::ricci_prescribed,
        FlowFamily::calabi,          FlowFamily::calabi_modified,      FlowFamily::alpha_ricci,
        FlowFamily::alpha_ricci_normalized, FlowFamily::alpha_calabi,  FlowFamily::alpha_calabi_modified,
        FlowFamily::alpha_prescribed};
    return all;
}

inline std::string to_string(FlowFamily f) {
    switch (f) {
        case FlowFamily::ricci: return "ricci";
        case FlowFamily::ricci_normalized: return "ricci_normalized";
        case FlowFamily::ricci_prescribed: return "ricci_prescribed";
        case FlowFamily::calabi: return "calabi";
        case FlowFamily::calabi_modified: return "calabi_modified";
        case FlowFamily::alpha_ricci: return "alpha_ricci";
        case FlowFamily::alpha_ricci_normalized: return "alpha_ricci_normalized";
        case FlowFamily::alpha_calabi: return "alpha_calabi";
        case FlowFamily::alpha_calabi_modified: return "alpha_calabi_modified";
        case FlowFamily::alpha_prescribed: return "alpha_prescribed";
    }
    return "?";
}

/// Accepts '-' or '_' as the word separator.
inline FlowFamily parse_flow_family(std::string name) {
    std::replace(name.begin(), name.end(), '-', '_');
    for (FlowFamily f : all_flow_families())
        if (to_string(f) == name) return f;
    throw InvalidInput("unknown flow family '" + name + "'");
}

inline bool is_alpha_family(FlowFamily f) {
    return f == FlowFamily::alpha_ricci || f == FlowFamily::alpha_ricci_normalized ||
           f == FlowFamily::alpha_calabi || f == FlowFamily::alpha_calabi_modified ||
           f == FlowFamily::alpha_prescribed;
}

inline bool is_prescribed(FlowFamily f) {
    return f == FlowFamily::ricci_prescribed || f == FlowFamily::alpha_prescribed;
}

enum class ConservedKind { none, measure, product };

enum class Termination { converged, max_time, max_steps, stepped_out_of_domain, diverged, singular };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_time: return "max_time";
        case Termination::max_steps: return "max_steps";
        case Termination::stepped_out_of_domain: return "stepped_out_of_domain";
        case Termination::diverged: return "diverged";
        case Termination::singular: return "singular";
    }
    return "?";
}

struct StopOptions {
    double max_time = 100.0;
    long max_steps = 1000000;
    double epsilon = 1e-9;
    /// Divergence guard on radii after scale normalization.
    double radius_low = 1e-8;
    double radius_high = 1e8;
};

struct FlowSpec {
    FlowFamily family = FlowFamily::ricci_normalized;
    /// Ignored (fixed to 2) for the non-alpha families.
    double alpha = 2.0;
    std::optional<Eigen::VectorXd> target;
    IntegratorOptions integrator;
    StopOptions stop;
    /// Rescale onto the conserved level set after every step.
    bool project = true;
    /// Record the potential F and Calabi energy at every sample.
    bool record_energies = true;

    double effective_alpha() const { return is_alpha_family(family) ? alpha : 2.0; }

    void validate(int vertex_count) const {
        integrator.validate();
        if (!(stop.max_time > 0 && stop.max_steps > 0 && stop.epsilon > 0))
            throw InvalidInput("stop limits must be positive");
        if (!std::isfinite(alpha)) throw InvalidInput("alpha must be finite");
        if (is_prescribed(family) != target.has_value())
            throw InvalidInput(is_prescribed(family)
                                   ? "prescribed families need a target curvature"
                                   : "a target curvature is only valid for prescribed families");
        if (target && target->size() != vertex_count)
            throw InvalidInput("target curvature has the wrong length");
    }

    /// Same spec with a default max step better suited to the Calabi-type
    /// fields (their Jacobian is roughly the square of the Ricci one).
    static FlowSpec for_family(FlowFamily f, double alpha = 2.0) {
        FlowSpec s;
        s.family = f;
        s.alpha = alpha;
        if (f == FlowFamily::calabi || f == FlowFamily::calabi_modified ||
            f == FlowFamily::alpha_calabi || f == FlowFamily::alpha_calabi_modified)
            s.integrator.max_step = 0.05;
        return s;
    }
};

/// The quantity each family preserves exactly.
inline ConservedKind conserved_kind(const FlowSpec& spec) {
    const double a = spec.effective_alpha();
    switch (spec.family) {
        case FlowFamily::ricci_normalized:
        case FlowFamily::calabi:
            return ConservedKind::measure;
        case FlowFamily::alpha_ricci_normalized:
        case FlowFamily::alpha_calabi:
            return a == 0.0 ? ConservedKind::product : ConservedKind::measure;
        case FlowFamily::calabi_modified:
        case FlowFamily::alpha_calabi_modified:
            return ConservedKind::product;
        default:
            return ConservedKind::none;
    }
}

/// ||r||_alpha^alpha, or prod r_i.
inline double conserved_value(ConservedKind kind, const Eigen::VectorXd& log_r, double alpha) {
    switch (kind) {
        case ConservedKind::measure:
            return (alpha * log_r.array()).exp().sum();
        case ConservedKind::product:
            return std::exp(log_r.sum());
        case ConservedKind::none:
            return std::numeric_limits<double>::quiet_NaN();
    }
    return 0.0;
}

inline void project_conserved(ConservedKind kind, Eigen::VectorXd& log_r, double alpha,
                              double value) {
    switch (kind) {
        case ConservedKind::measure:
            log_r.array() += (std::log(value) - std::log(conserved_value(kind, log_r, alpha))) / alpha;
            break;
        case ConservedKind::product:
            log_r.array() += (std::log(value) - log_r.sum()) / static_cast<double>(log_r.size());
            break;
        case ConservedKind::none:
            break;
    }
}

/// d(ln r)/dt of the selected family.
inline Eigen::VectorXd vector_field(const FlowSpec& spec, const Surface2Complex& c,
                                    const PackingMetric& r) {
    const double a = spec.effective_alpha();
    switch (spec.family) {
        case FlowFamily::ricci:
            return -0.5 * curvature_R(c, r);
        case FlowFamily::ricci_normalized:
            return 0.5 * (average_alpha_curvature(c, r, 2.0) - curvature_R(c, r).array()).matrix();
        case FlowFamily::ricci_prescribed:
            return 0.5 * (*spec.target - curvature_R(c, r));
        case FlowFamily::calabi: {
            // (1/2) Delta R
            const Eigen::MatrixXd L = jacobian_logr(c, r).matrix;
            const Eigen::VectorXd R = curvature_R(c, r);
            return -0.25 * ((L * R).array() / r.radii().array().square()).matrix();
        }
        case FlowFamily::calabi_modified: {
            const Eigen::MatrixXd A = hessian_ricci_potential(c, r, 2.0).matrix;
            return -0.25 * A * calabi_residual(c, r, 2.0);
        }
        case FlowFamily::alpha_ricci:
            return -curvature_alpha(c, r, a);
        case FlowFamily::alpha_ricci_normalized:
            return (average_alpha_curvature(c, r, a) - curvature_alpha(c, r, a).array()).matrix();
        case FlowFamily::alpha_calabi: {
            const Eigen::MatrixXd L = jacobian_logr(c, r).matrix;
            const Eigen::VectorXd Ra = curvature_alpha(c, r, a);
            return -((L * Ra).array() / radii_pow(r, a).array()).matrix();
        }
        case FlowFamily::alpha_calabi_modified: {
            const Eigen::MatrixXd A = hessian_ricci_potential(c, r, a).matrix;
            return -A * calabi_residual(c, r, a);
        }
        case FlowFamily::alpha_prescribed:
            return *spec.target - curvature_alpha(c, r, a);
    }
    return {};
}

/// The alpha family that coincides with a non-alpha family at alpha = 2, and
/// the time factor k with r_alpha(t) = r(k t). The alpha fields take
/// derivatives in ln r instead of ln r^2: k = 2 for the Ricci-type flows and
/// k = 4 for the Calabi-type flows (one factor 2 from the time derivative,
/// one from the Laplacian).
struct AlphaCounterpart {
    FlowFamily family;
    double time_factor;
};

inline AlphaCounterpart alpha_counterpart(FlowFamily f) {
    switch (f) {
        case FlowFamily::ricci: return {FlowFamily::alpha_ricci, 2.0};
        case FlowFamily::ricci_normalized: return {FlowFamily::alpha_ricci_normalized, 2.0};
        case FlowFamily::ricci_prescribed: return {FlowFamily::alpha_prescribed, 2.0};
        case FlowFamily::calabi: return {FlowFamily::alpha_calabi, 4.0};
        case FlowFamily::calabi_modified: return {FlowFamily::alpha_calabi_modified, 4.0};
        default: throw InvalidInput(to_string(f) + " is already an alpha family");
    }
}

/// Convergence residual of the family at r.
inline double flow_residual(const FlowSpec& spec, const Surface2Complex& c, const PackingMetric& r) {
    if (is_prescribed(spec.family))
        return prescribed_curvature_residual(c, r, spec.effective_alpha(), *spec.target);
    return constant_curvature_residual(c, r, spec.effective_alpha());
}

struct FlowState {
    double t = 0.0;
    Eigen::VectorXd log_r;
    /// Proposed size of the next step.
    double dt = 1e-3;

    PackingMetric metric() const { return PackingMetric::from_log(log_r); }
};

struct FlowTrace {
    FlowFamily family = FlowFamily::ricci_normalized;
    double alpha = 2.0;
    ConservedKind conserved = ConservedKind::none;

    std::vector<double> times;
    std::vector<Eigen::VectorXd> radii;
    std::vector<Eigen::VectorXd> curvature;  // R_alpha
    std::vector<double> conserved_values;
    std::vector<double> potential;  // F relative to the initial metric
    std::vector<double> calabi;
    std::vector<double> residual;

    Termination termination = Termination::max_time;
    std::string message;
    long steps = 0;
    long rejected_steps = 0;

    std::size_t size() const { return times.size(); }
    PackingMetric final_metric() const { return PackingMetric(radii.back()); }
    double final_residual() const { return residual.back(); }
};

/// Largest relative deviation of the conserved quantity from its first sample.
inline double conserved_drift(const FlowTrace& trace) {
    if (trace.conserved == ConservedKind::none || trace.conserved_values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const double c0 = trace.conserved_values.front();
    double worst = 0.0;
    for (double c : trace.conserved_values) worst = std::max(worst, std::abs(c - c0) / std::abs(c0));
    return worst;
}

/// Largest increase between adjacent samples (<= 0 means nonincreasing).
inline double max_increase(const std::vector<double>& values) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < values.size(); ++k) worst = std::max(worst, values[k] - values[k - 1]);
    return values.size() < 2 ? 0.0 : worst;
}

struct RateFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    int points = 0;
};

/// Least-squares line through (t, ln residual) over the second half of the run
/// (by time), skipping zero residuals.
inline RateFit fit_exponential_rate(const std::vector<double>& times,
                                    const std::vector<double>& residuals) {
    RateFit fit;
    if (times.size() < 3) return fit;
    const double t_half = 0.5 * (times.front() + times.back());
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] >= t_half && residuals[k] > 0.0 && std::isfinite(residuals[k])) {
            xs.push_back(times[k]);
            ys.push_back(std::log(residuals[k]));
        }
    fit.points = static_cast<int>(xs.size());
    if (xs.size() < 3) return fit;
    const Eigen::Map<const Eigen::VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
    const Eigen::Map<const Eigen::VectorXd> y(ys.data(), static_cast<Eigen::Index>(ys.size()));
    const double mx = x.mean(), my = y.mean();
    const double sxx = (x.array() - mx).square().sum();
    const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
    const double syy = (y.array() - my).square().sum();
    if (sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return fit;
}

/// Potential of the family (normalized, or with the prescribed target).
inline double potential_increment(const FlowSpec& spec, const Surface2Complex& c,
                                  const Eigen::VectorXd& from, const Eigen::VectorXd& to) {
    return ricci_potential(c, from, to, spec.effective_alpha(), spec.target).value;
}

/// One accepted integrator step from `state` (no projection, no monitors).
inline FlowState step(const FlowSpec& spec, const Surface2Complex& c, const FlowState& state,
                      double t_end = std::numeric_limits<double>::infinity()) {
    spec.validate(c.vertex_count());
    LogRadiusIntegrator integ(
        [&](const Eigen::VectorXd& x) { return vector_field(spec, c, PackingMetric::from_log(x)); },
        spec.integrator);
    FlowState next = state;
    integ.step(next.log_r, next.t, next.dt, t_end);
    return next;
}

namespace detail {

inline bool diverged(const Eigen::VectorXd& log_r, const StopOptions& stop) {
    // normalize by the geometric mean so the guard is scale free
    const Eigen::ArrayXd x = log_r.array() - log_r.mean();
    if (!x.isFinite().all()) return true;
    return x.minCoeff() < std::log(stop.radius_low) || x.maxCoeff() > std::log(stop.radius_high);
}

}  // namespace detail

/// Integrates the flow from r0 until convergence or a stop condition.
inline FlowTrace run(const FlowSpec& spec, const Surface2Complex& c, const PackingMetric& r0) {
    require_matching(c, r0);
    spec.validate(c.vertex_count());
    const double a = spec.effective_alpha();

    FlowTrace trace;
    trace.family = spec.family;
    trace.alpha = a;
    trace.conserved = conserved_kind(spec);

    Eigen::VectorXd x = r0.log_radii();
    const double c0 = conserved_value(trace.conserved, x, a);
    double F = 0.0;
    Eigen::VectorXd x_prev = x;

    auto record = [&](double t, const Eigen::VectorXd& lx) {
        const PackingMetric r = PackingMetric::from_log(lx);
        trace.times.push_back(t);
        trace.radii.push_back(r.radii());
        trace.curvature.push_back(curvature_alpha(c, r, a));
        trace.conserved_values.push_back(conserved_value(trace.conserved, lx, a));
        const double res = flow_residual(spec, c, r);
        trace.residual.push_back(res);
        if (spec.record_energies) {
            trace.potential.push_back(F);
            trace.calabi.push_back(calabi_energy(c, r, a, spec.target));
        }
        return res;
    };

    LogRadiusIntegrator integ(
        [&](const Eigen::VectorXd& lx) { return vector_field(spec, c, PackingMetric::from_log(lx)); },
        spec.integrator);

    double t = 0.0;
    double dt = spec.integrator.initial_step;
    double res = record(t, x);
    while (true) {
        if (res < spec.stop.epsilon) {
            trace.termination = Termination::converged;
            break;
        }
        if (t >= spec.stop.max_time) {
            trace.termination = Termination::max_time;
            break;
        }
        if (trace.steps >= spec.stop.max_steps) {
            trace.termination = Termination::max_steps;
            break;
        }
        try {
            const StepReport rep = integ.step(x, t, dt, spec.stop.max_time);
            trace.rejected_steps += rep.rejected + rep.domain_rejections;
        } catch (const StepFailure& e) {
            trace.termination = Termination::stepped_out_of_domain;
            trace.message = e.what();
            break;
        }
        ++trace.steps;
        if (spec.project && trace.conserved != ConservedKind::none) {
            project_conserved(trace.conserved, x, a, c0);
            integ.reset();
        }
        if (detail::diverged(x, spec.stop)) {
            trace.termination = Termination::diverged;
            trace.message = "normalized radii left [" + std::to_string(spec.stop.radius_low) + ", " +
                            std::to_string(spec.stop.radius_high) + "]";
            record(t, x);
            break;
        }
        try {
            if (spec.record_energies) F += potential_increment(spec, c, x_prev, x);
            res = record(t, x);
        } catch (const DegenerateGeometry& e) {
            trace.termination = Termination::stepped_out_of_domain;
            trace.message = e.what();
            break;
        }
        x_prev = x;
    }
    return trace;
}

struct EnvelopeSample {
    double t = 0.0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double r_min = 0.0;
    double r_max = 0.0;
};

struct MaxPrincipleReport {
    std::vector<EnvelopeSample> samples;
    /// Blow-up times of the comparison solutions (infinite if none).
    double lower_valid_until = std::numeric_limits<double>::infinity();
    double upper_valid_until = std::numeric_limits<double>::infinity();
    bool initially_nonpositive = false;
    bool initially_nonnegative = false;
    int lower_violations = 0;
    int upper_violations = 0;
    int sign_violations = 0;
    double worst_violation = 0.0;

    bool ok() const { return lower_violations + upper_violations + sign_violations == 0; }
};

/// Solution of s' = c s (s - a), s(0) = s0. Valid before its blow-up time.
inline double comparison_solution(double s0, double a, double c, double t) {
    if (s0 == 0.0 || c == 0.0) return s0;
    if (a == 0.0) return s0 / (1.0 - c * s0 * t);
    return a / (1.0 - (1.0 - a / s0) * std::exp(c * a * t));
}

/// Blow-up time of s' = c s (s - a) from s0 (infinite when the solution is global).
inline double comparison_blowup_time(double s0, double a, double c) {
    if (s0 == 0.0 || c == 0.0) return std::numeric_limits<double>::infinity();
    if (a == 0.0) {
        const double tb = 1.0 / (c * s0);
        return tb > 0.0 ? tb : std::numeric_limits<double>::infinity();
    }
    // 1 - (1 - a/s0) e^{c a t} = 0
    const double k = 1.0 - a / s0;
    if (k <= 0.0) return std::numeric_limits<double>::infinity();
    const double tb = -std::log(k) / (c * a);
    return tb > 0.0 ? tb : std::numeric_limits<double>::infinity();
}

/// Checks the sampled extreme alpha-curvatures of a normalized Ricci or
/// alpha-Ricci trace against the comparison solutions of
/// s' = c s (s - R_av), c = alpha (c = 1 in the ln r^2 time of the
/// alpha = 2 normalized Ricci flow), started from R_min(0) and R_max(0).
/// Also checks that initially nonpositive (nonnegative) curvature stays so.
inline MaxPrincipleReport max_principle_bounds(const Surface2Complex& c, const FlowTrace& trace,
                                               double tolerance = 1e-6) {
    double rate;
    if (trace.family == FlowFamily::ricci_normalized)
        rate = 1.0;
    else if (trace.family == FlowFamily::alpha_ricci_normalized)
        rate = trace.alpha;
    else
        throw NotApplicable("curvature envelopes apply to the normalized Ricci families only, not " +
                            to_string(trace.family));
    if (trace.size() == 0) throw InvalidInput("empty trace");

    MaxPrincipleReport rep;
    const PackingMetric r0(trace.radii.front());
    const double avg = average_alpha_curvature(c, r0, trace.alpha);
    const double s_lo = trace.curvature.front().minCoeff();
    const double s_hi = trace.curvature.front().maxCoeff();
    rep.lower_valid_until = comparison_blowup_time(s_lo, avg, rate);
    rep.upper_valid_until = comparison_blowup_time(s_hi, avg, rate);
    rep.initially_nonpositive = s_hi <= 0.0;
    rep.initially_nonnegative = s_lo >= 0.0;

    for (std::size_t k = 0; k < trace.size(); ++k) {
        EnvelopeSample s;
        s.t = trace.times[k] - trace.times.front();
        s.r_min = trace.curvature[k].minCoeff();
        s.r_max = trace.curvature[k].maxCoeff();
        if (s.t < rep.lower_valid_until) s.lower = comparison_solution(s_lo, avg, rate, s.t);
        if (s.t < rep.upper_valid_until) s.upper = comparison_solution(s_hi, avg, rate, s.t);
        if (std::isfinite(s.lower)) {
            const double v = s.lower - s.r_min;
            if (v > tolerance * std::max(1.0, std::abs(s.lower))) {
                ++rep.lower_violations;
                rep.worst_violation = std::max(rep.worst_violation, v);
            }
        }
        if (std::isfinite(s.upper)) {
            const double v = s.r_max - s.upper;
            if (v > tolerance * std::max(1.0, std::abs(s.upper))) {
                ++rep.upper_violations;
                rep.worst_violation = std::max(rep.worst_violation, v);
            }
        }
        if (rep.initially_nonpositive && s.r_max > tolerance) ++rep.sign_violations;
        if (rep.initially_nonnegative && s.r_min < -tolerance) ++rep.sign_violations;
        rep.samples.push_back(s);
    }
    return rep;
}

enum class SolveMethod { flow, newton };

struct ConstantCurvatureResult {
    PackingMetric metric;
    double residual = 0.0;
    int iterations = 0;
    SolveMethod method = SolveMethod::newton;
};

struct SolveOptions {
    double tolerance = 1e-9;
    int max_iterations = 100;
    /// Used by the flow route.
    double max_time = 1000.0;
};

/// Metric of constant alpha-curvature reached from r0, normalized to the
/// initial ||r||_alpha^alpha (product of radii for alpha = 0).
inline ConstantCurvatureResult find_constant_curvature(const Surface2Complex& c, double alpha,
                                                       const PackingMetric& r0, SolveMethod method,
                                                       const SolveOptions& opt = {}) {
    require_matching(c, r0);
    const int n = c.vertex_count();
    const ConservedKind kind = alpha == 0.0 ? ConservedKind::product : ConservedKind::measure;
    const double c0 = conserved_value(kind, r0.log_radii(), alpha);
    ConstantCurvatureResult out;
    out.method = method;

    if (method == SolveMethod::flow) {
        FlowSpec spec = FlowSpec::for_family(
            alpha == 2.0 ? FlowFamily::ricci_normalized : FlowFamily::alpha_ricci_normalized, alpha);
        spec.stop.epsilon = opt.tolerance;
        spec.stop.max_time = opt.max_time;
        spec.record_energies = false;
        const FlowTrace trace = run(spec, c, r0);
        out.metric = trace.final_metric();
        out.residual = trace.final_residual();
        out.iterations = static_cast<int>(trace.steps);
        if (trace.termination != Termination::converged)
            throw NoConvergence(std::string("flow ended with ") + to_string(trace.termination),
                                out.iterations, out.residual);
        return out;
    }

    // Newton on g(u) = K - R_alpha,av r^alpha = 0 in u = ln r. g is invariant
    // under u -> u + t1, so the step is solved with the rank-one term 11^T/N
    // that removes the scaling direction.
    Eigen::VectorXd u = r0.log_radii();
    auto residual_at = [&](const Eigen::VectorXd& x) {
        return constant_curvature_residual(c, PackingMetric::from_log(x), alpha);
    };
    double res = residual_at(u);
    const Eigen::MatrixXd P = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    int it = 0;
    while (res >= opt.tolerance && it < opt.max_iterations) {
        ++it;
        const PackingMetric r = PackingMetric::from_log(u);
        const Eigen::VectorXd g = potential_gradient_logr(c, r, alpha);
        const Eigen::MatrixXd H = hessian_ricci_potential(c, r, alpha).matrix + P;
        const Eigen::VectorXd delta = H.fullPivLu().solve(-g);
        if (!delta.allFinite()) break;
        double step_len = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls, step_len *= 0.5) {
            const Eigen::VectorXd trial = u + step_len * delta;
            double tres;
            try {
                tres = residual_at(trial);
            } catch (const DegenerateGeometry&) {
                continue;
            }
            if (tres < res) {
                u = trial;
                res = tres;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    project_conserved(kind, u, alpha, c0);
    out.metric = PackingMetric::from_log(u);
    out.residual = residual_at(u);
    out.iterations = it;
    if (!(out.residual < opt.tolerance))
        throw NoConvergence("Newton iteration stalled", it, out.residual);
    return out;
}

}  // namespace packflow
