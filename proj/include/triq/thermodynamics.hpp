// thermodynamics.hpp: steady-state heat currents Tr{H_S L_x[rho]} per qubit,
// per reservoir and per dissipation channel, the crossover fractions at
// which one channel current vanishes, and the rectification factor.
//
// Sign convention: positive = heat flowing from the reservoir into the
// system. Units of omega_0^2.

#pragma once

#include "triq/liouvillian.hpp"
#include "triq/model.hpp"
#include "triq/steady_state.hpp"
#include "triq/types.hpp"

namespace triq {

struct HeatReport {
    double q_a = 0.0;
    double q_b = 0.0;
    double q_c = 0.0;
    double q_l = 0.0;           // q_a + q_c + q_l_crossing
    double q_r = 0.0;           // q_b
    double q_l_direct = 0.0;    // q_a + q_c
    double q_l_crossing = 0.0;  // L_AC contribution, 0 outside common mode
    bool common = false;
};

// Tr{H_S X[rho]} for a single channel of the generator.
double heat_current_channel(const Liouvillian& gen, const DensityMatrix& rho, Channel ch);

double heat_current_qubit(const SystemParams& params, const DensityMatrix& rho, Qubit mu);
double heat_current_reservoir(const SystemParams& params, const DensityMatrix& rho, Reservoir alpha);

struct ChannelSplit {
    double direct = 0.0;
    double crossing = 0.0;
};

// Throws ModeError outside common mode.
ChannelSplit channel_split(const SystemParams& params, const DensityMatrix& rho);

HeatReport heat_report(const Liouvillian& gen, const DensityMatrix& rho);
HeatReport heat_report(const SystemParams& params, const DensityMatrix& rho);

// Currents of the mixture (1-p) rho1 + p rho2, formed term by term in
// extended precision instead of from the rounded mixed matrix.
HeatReport heat_report(const Liouvillian& gen, const SteadyDecomposition& d);

struct CrossoverFractions {
    double p_d = 0.0;  // direct channel current vanishes
    double p_c = 0.0;  // crossing channel current vanishes
    bool p_d_in_range = false;
    bool p_c_in_range = false;
};

// Requires common mode. Throws DegenerateDenominator if a denominator is
// below 1e-16 in magnitude.
CrossoverFractions crossover_fractions(const SystemParams& params);

struct RectificationResult {
    double q_forward = 0.0;  // q_L at (T_L, T_R)
    double q_reverse = 0.0;  // q_L at (T_R, T_L)
    double r = 0.0;
    bool defined = false;
    double r_from_right = 0.0;  // same factor from q_R, equal by energy conservation
};

// R = ||q_f| - |q_r|| / max(|q_f|, |q_r|); 0 and undefined when both are below 1e-16.
double rectification_factor(double q_forward, double q_reverse, bool* defined = nullptr);

// Steady states at fraction p in common mode (p ignored otherwise).
RectificationResult rectification(const SystemParams& params, double p = 1.0);

// Closed-form currents built from transition fluxes
//   Gamma_ij = 2 [J(-w_ij) rho_ii - J(+w_ij) rho_jj]
// evaluated on analytic populations: spanning-tree populations for Ihr, the
// closed forms of rho1 / rho2 otherwise.
enum class AnalyticState { Ihr, Rho1, Rho2 };
HeatReport analytic_heat_currents(const SystemParams& params, AnalyticState which);

// Channel current printed for rho2 at T_R = 0, 4 kappa (w26 s55 + w48 s66),
// with s55 = rho_25 and s66 = rho_47 of the given state (per-level weights).
double printed_zero_right_channel_current(const SystemParams& params, const DensityMatrix& rho2);

} // namespace triq
