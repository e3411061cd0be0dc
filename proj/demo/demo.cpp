// Curvature of the tetrahedron boundary, its constant-curvature metrics and
// a normalized Ricci flow on the genus-2 surface.

#include "packflow/packflow.hpp"

#include <cstdio>

int main() {
    using namespace packflow;

    const Surface2Complex tet = meshes::tetrahedron();
    const PackingMetric ones = PackingMetric::constant(4);
    const CurvatureVector K = curvature_K(tet, ones);
    std::printf("tetrahedron, r = 1: K = %.12f %.12f %.12f %.12f\n", K[0], K[1], K[2], K[3]);

    // a second constant-curvature metric, (1, x, x, x)
    const auto sol = find_constant_curvature(tet, 2.0, PackingMetric(std::vector<double>{1, 6, 6, 6}),
                                             SolveMethod::newton);
    std::printf("second constant-curvature metric: x = %.10f (residual %.1e)\n",
                sol.metric[1] / sol.metric[0], sol.residual);

    const Surface2Complex g2 = meshes::genus2();
    const FlowSpec spec = FlowSpec::for_family(FlowFamily::ricci_normalized);
    const FlowTrace tr = run(spec, g2, PackingMetric::constant(g2.vertex_count()));
    const RateFit fit = fit_exponential_rate(tr.times, tr.residual);
    std::printf("genus 2 normalized Ricci flow: %s at t = %.3f, residual %.2e, log-rate %.3f\n",
                to_string(tr.termination), tr.times.back(), tr.final_residual(), fit.slope);
    return tr.termination == Termination::converged ? 0 : 1;
}
