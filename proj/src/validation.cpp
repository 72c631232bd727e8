#include "triq/validation.hpp"

#include <algorithm>
#include <cmath>

#include "triq/liouvillian.hpp"
#include "triq/steady_state.hpp"
#include "triq/thermodynamics.hpp"

namespace triq {

namespace {

double max_abs_diff(const Matrix8c& a, const Matrix8c& b) { return (a - b).cwiseAbs().maxCoeff(); }

DensityMatrix diagonal_state(const std::array<double, 8>& w) {
    Matrix8c m = Matrix8c::Zero();
    for (int k = 0; k < kDim; ++k) m(k, k) = w[k];
    return DensityMatrix::unchecked(m);
}

OracleSample solve_point(const SystemParams& params, const DensityMatrix& rho0, bool common) {
    OracleSample s;
    s.params = params;
    s.common = common;
    const Liouvillian gen(params);

    DensityMatrix analytic;
    HeatReport heat;
    if (common) {
        const SteadyDecomposition d = steady_chr(params, rho0);
        s.p = d.p;
        s.rho = d.rho;
        const Matrix8c a = (1.0 - d.p) * rho1_closed_form(params).matrix()
                           + d.p * rho2_closed_form(params).matrix();
        analytic = DensityMatrix::unchecked(a);
        heat = heat_report(gen, d);
    } else {
        s.rho = steady_ihr(params);
        analytic = diagonal_state(ihr_tree_populations(params));
        heat = heat_report(gen, s.rho);
    }

    const SteadyEvolveResult ev = evolve_to_steady(params, rho0);
    s.rk4_residual = ev.residual;
    s.analytic_vs_null = max_abs_diff(analytic.matrix(), s.rho.matrix());
    s.null_vs_rk4 = max_abs_diff(s.rho.matrix(), ev.rho.matrix());
    s.analytic_vs_rk4 = max_abs_diff(analytic.matrix(), ev.rho.matrix());
    s.q_l = heat.q_l;
    s.q_r = heat.q_r;
    s.conservation = std::abs(heat.q_l + heat.q_r) / std::max(std::abs(heat.q_l), params.kappa);
    return s;
}

} // namespace

SystemParams random_independent_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(1.0, 6.0), g(-0.4, 0.4), T(0.3, 80.0), k(1e-4, 1e-2);
    SystemParams p;
    p.omega_a = w(rng);
    p.omega_b = w(rng);
    p.omega_c = w(rng);
    p.g_ab = g(rng);
    p.g_bc = g(rng);
    p.g_ac = g(rng);
    p.kappa = k(rng);
    p.t_left = T(rng);
    p.t_right = T(rng);
    p.mode = DissipationMode::ForceIndependent;
    return p;
}

SystemParams random_common_point(std::mt19937_64& rng) {
    SystemParams p = random_independent_point(rng);
    p.omega_c = p.omega_a;
    p.g_bc = p.g_ab;
    p.mode = DissipationMode::Auto;
    return p;
}

DensityMatrix random_density_matrix(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix8c g;
    for (int j = 0; j < kDim; ++j)
        for (int i = 0; i < kDim; ++i) g(i, j) = cd(n(rng), n(rng));
    Matrix8c rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix::unchecked(rho);
}

OracleReport oracle_triangle(const OracleOptions& options) {
    OracleReport report;
    std::mt19937_64 rng(options.seed);
    for (bool common : {false, true}) {
        for (int i = 0; i < options.points_per_mode; ++i) {
            const SystemParams p = common ? random_common_point(rng) : random_independent_point(rng);
            const DensityMatrix rho0 = random_density_matrix(rng);
            report.samples.push_back(solve_point(p, rho0, common));
        }
    }
    for (const OracleSample& s : report.samples) {
        report.max_disagreement = std::max(
            {report.max_disagreement, s.analytic_vs_null, s.null_vs_rk4, s.analytic_vs_rk4});
        report.max_conservation = std::max(report.max_conservation, s.conservation);
    }
    report.agreement_ok = report.max_disagreement <= options.tolerance;
    report.conservation_ok = report.max_conservation <= options.conservation_tol;
    return report;
}

} // namespace triq
