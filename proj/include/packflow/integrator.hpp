#pragma once

// One-step driver for flows written as d(ln r)/dt = field(ln r).

#include <boost/numeric/odeint.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "packflow/error.hpp"

namespace packflow {

enum class IntegratorMethod { dopri5, rk4, euler };

inline const char* to_string(IntegratorMethod m) {
    switch (m) {
        case IntegratorMethod::dopri5: return "dopri5";
        case IntegratorMethod::rk4: return "rk4";
        case IntegratorMethod::euler: return "euler";
    }
    return "?";
}

struct IntegratorOptions {
    IntegratorMethod method = IntegratorMethod::dopri5;
    double initial_step = 1e-3;
    double min_step = 1e-12;
    double max_step = 0.5;
    double abs_tolerance = 1e-12;
    double rel_tolerance = 1e-9;

    void validate() const {
        if (!(initial_step > 0 && min_step > 0 && max_step >= min_step && abs_tolerance > 0 &&
              rel_tolerance > 0))
            throw InvalidInput("integrator steps and tolerances must be positive");
    }
};

struct StepReport {
    double dt_taken = 0.0;
    int rejected = 0;
    int domain_rejections = 0;
};

/// Advances x = ln r by single accepted steps. Field evaluations that leave
/// the geometric domain (DegenerateGeometry) and steps whose end point fails
/// `in_domain` are retried with half the step size.
class LogRadiusIntegrator {
public:
    using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
    using DomainCheck = std::function<bool(const Eigen::VectorXd&)>;

    LogRadiusIntegrator(Field field, IntegratorOptions opt, DomainCheck in_domain = {})
        : field_(std::move(field)), in_domain_(std::move(in_domain)), opt_(opt),
          controlled_(boost::numeric::odeint::make_controlled(
              opt.abs_tolerance, opt.rel_tolerance,
              boost::numeric::odeint::runge_kutta_dopri5<State>())) {
        opt_.validate();
    }

    const IntegratorOptions& options() const { return opt_; }

    /// Call after modifying the state outside step() (e.g. a projection).
    void reset() { controlled_.reset(); }

    /// One accepted step from (x, t). dt is the proposed step on entry and the
    /// suggested next step on exit; the step never passes t_end.
    StepReport step(Eigen::VectorXd& x, double& t, double& dt, double t_end) {
        namespace odeint = boost::numeric::odeint;
        auto sys = [this](const State& s, State& ds, double) {
            const Eigen::Map<const Eigen::VectorXd> xs(s.data(), static_cast<Eigen::Index>(s.size()));
            const Eigen::VectorXd v = field_(xs);
            ds.assign(v.data(), v.data() + v.size());
        };
        StepReport rep;
        dt = std::min({dt, opt_.max_step, t_end - t});
        while (true) {
            if (!(dt >= opt_.min_step) && !(t_end - t < opt_.min_step && dt > 0))
                throw StepFailure("step size fell below " + std::to_string(opt_.min_step) +
                                  " at t = " + std::to_string(t));
            State s(x.data(), x.data() + x.size());
            double tt = t;
            const double dt_try = dt;
            bool accepted = false;
            try {
                switch (opt_.method) {
                    case IntegratorMethod::dopri5: {
                        double dtt = dt;
                        if (controlled_.try_step(sys, s, tt, dtt) == odeint::success) {
                            accepted = true;
                            dt = dtt;
                        } else {
                            ++rep.rejected;
                            dt = dtt;
                        }
                        break;
                    }
                    case IntegratorMethod::rk4:
                        rk4_.do_step(sys, s, tt, dt);
                        accepted = true;
                        break;
                    case IntegratorMethod::euler:
                        euler_.do_step(sys, s, tt, dt);
                        accepted = true;
                        break;
                }
            } catch (const DegenerateGeometry&) {
                controlled_.reset();
                ++rep.domain_rejections;
                dt = 0.5 * dt_try;
                continue;
            }
            if (!accepted) continue;
            Eigen::VectorXd xn = Eigen::Map<const Eigen::VectorXd>(s.data(), x.size());
            if (in_domain_ && !in_domain_(xn)) {
                controlled_.reset();
                ++rep.domain_rejections;
                dt = 0.5 * dt_try;
                continue;
            }
            x = std::move(xn);
            t += dt_try;
            rep.dt_taken = dt_try;
            if (opt_.method != IntegratorMethod::dopri5) dt = opt_.initial_step;
            dt = std::min(dt, opt_.max_step);
            return rep;
        }
    }

private:
    using State = std::vector<double>;
    using Controlled = decltype(boost::numeric::odeint::make_controlled(
        1.0, 1.0, boost::numeric::odeint::runge_kutta_dopri5<std::vector<double>>()));

    Field field_;
    DomainCheck in_domain_;
    IntegratorOptions opt_;
    Controlled controlled_;
    boost::numeric::odeint::runge_kutta4<State> rk4_;
    boost::numeric::odeint::euler<State> euler_;
};

}  // namespace packflow
