#include "triq/thermodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "triq/diagnostics.hpp"
#include "triq/errors.hpp"
#include "triq/steady_state.hpp"

namespace triq {

namespace {

constexpr double kImagResidueTol = 1e-10;
constexpr double kZeroCurrent = 1e-16;

void report_residue(long double im, long double re) {
    if (std::abs(im) > kImagResidueTol * std::max(1.0L, std::abs(re))) {
        std::ostringstream os;
        os << "heat current: imaginary residue " << static_cast<double>(im) << " discarded";
        diagnostics::warn(os.str());
    }
}

// Tr{H_S X[rho]} for the jump terms of one channel. A term with a == c puts
// 2 r rho_bd on the diagonal at a and removes r rho_bd at d and at b, so its
// energy is r rho_bd (2 lambda_a - lambda_b - lambda_d); other terms only
// touch off-diagonal entries. Accumulated in extended precision because the
// channel currents are differences of nearly equal gain and loss terms.
// Element (i, j) of the state; the two-matrix form evaluates a mixture.
struct Single {
    const Matrix8c& m;
    std::complex<long double> operator()(int i, int j) const { return m(i, j); }
};
struct Mixture {
    const Matrix8c& m1;
    const Matrix8c& m2;
    long double p;
    std::complex<long double> operator()(int i, int j) const {
        return (1.0L - p) * std::complex<long double>(m1(i, j)) + p * std::complex<long double>(m2(i, j));
    }
};

template <class State>
double channel_energy(const Liouvillian& gen, const State& rho, Channel ch) {
    const auto& lam = gen.table().spectrum.lambdas;
    long double re = 0.0L, im = 0.0L;
    for (const JumpTerm& t : gen.terms()) {
        if (t.channel != ch || t.a != t.c || t.rate == 0.0) continue;
        const long double gap = 2.0L * lam[t.a] - static_cast<long double>(lam[t.b]) - lam[t.d];
        const std::complex<long double> x = rho(t.b, t.d);
        re += static_cast<long double>(t.rate) * gap * x.real();
        im += static_cast<long double>(t.rate) * gap * x.imag();
    }
    report_residue(im, re);
    return static_cast<double>(re);
}

// Net downward flux through t: Gamma = 2 [J(-w) rho_from - J(+w) rho_to].
double flux(const SystemParams& p, const Transition& t, const Matrix8c& rho) {
    const double temp = temperature_of(p, t.qubit);
    return 2.0 * (bath_rate(p.kappa, -t.frequency, temp) * rho(t.from, t.from).real()
                  - bath_rate(p.kappa, t.frequency, temp) * rho(t.to, t.to).real());
}

double direct_current(const SystemParams& p, const TransitionTable& table, const Matrix8c& rho,
                      Qubit q) {
    double s = 0.0;
    for (const Transition& t : table.of(q)) s -= t.frequency * flux(p, t, rho);
    return s;
}

// L_AC current carried by the coherences rho_25 and rho_47 (1-based):
// 4 rho_25 (w12 L+(w12) - w26 L-(w26)) + 4 rho_47 (w34 L+(w34) - w48 L-(w48)),
// w12, w26, w34, w48 being the gaps of A15, A26, A37, A48.
double crossing_current(const SystemParams& p, const TransitionTable& table, const Matrix8c& rho) {
    const double tl = p.t_left;
    const double w12 = table.entries[0].frequency;
    const double w26 = table.entries[1].frequency;
    const double w34 = table.entries[2].frequency;
    const double w48 = table.entries[3].frequency;
    const double r25 = rho(1, 4).real();
    const double r47 = rho(3, 6).real();
    return 4.0 * r25 * (w12 * bath_rate(p.kappa, w12, tl) - w26 * bath_rate(p.kappa, -w26, tl))
         + 4.0 * r47 * (w34 * bath_rate(p.kappa, w34, tl) - w48 * bath_rate(p.kappa, -w48, tl));
}

HeatReport assemble(double qa, double qb, double qc, double qcross, bool common) {
    HeatReport r;
    r.q_a = qa;
    r.q_b = qb;
    r.q_c = qc;
    r.q_l_direct = qa + qc;
    r.q_l_crossing = qcross;
    r.q_l = r.q_l_direct + qcross;
    r.q_r = qb;
    r.common = common;
    return r;
}

} // namespace

double heat_current_channel(const Liouvillian& gen, const DensityMatrix& rho, Channel ch) {
    if (ch == Channel::Coherent) return 0.0;
    return channel_energy(gen, Single{rho.matrix()}, ch);
}

double heat_current_qubit(const SystemParams& params, const DensityMatrix& rho, Qubit mu) {
    const Channel ch = mu == Qubit::A ? Channel::A : (mu == Qubit::B ? Channel::B : Channel::C);
    return channel_energy(Liouvillian(params), Single{rho.matrix()}, ch);
}

double heat_current_reservoir(const SystemParams& params, const DensityMatrix& rho, Reservoir alpha) {
    const Liouvillian gen(params);
    if (alpha == Reservoir::Right) return heat_current_channel(gen, rho, Channel::B);
    return heat_current_channel(gen, rho, Channel::A) + heat_current_channel(gen, rho, Channel::C)
         + heat_current_channel(gen, rho, Channel::AC);
}

ChannelSplit channel_split(const SystemParams& params, const DensityMatrix& rho) {
    if (!common_mode_active(params))
        throw ModeError("channel_split requires common-reservoir mode");
    const Liouvillian gen(params);
    ChannelSplit s;
    s.direct = heat_current_channel(gen, rho, Channel::A) + heat_current_channel(gen, rho, Channel::C);
    s.crossing = heat_current_channel(gen, rho, Channel::AC);
    return s;
}

namespace {

template <class State>
HeatReport report_of(const Liouvillian& gen, const State& rho) {
    const double qa = channel_energy(gen, rho, Channel::A);
    const double qb = channel_energy(gen, rho, Channel::B);
    const double qc = channel_energy(gen, rho, Channel::C);
    const double qx = gen.common_mode() ? channel_energy(gen, rho, Channel::AC) : 0.0;
    return assemble(qa, qb, qc, qx, gen.common_mode());
}

} // namespace

HeatReport heat_report(const Liouvillian& gen, const DensityMatrix& rho) {
    return report_of(gen, Single{rho.matrix()});
}

HeatReport heat_report(const Liouvillian& gen, const SteadyDecomposition& d) {
    return report_of(gen, Mixture{d.rho1.matrix(), d.rho2.matrix(), d.p});
}

HeatReport heat_report(const SystemParams& params, const DensityMatrix& rho) {
    return heat_report(Liouvillian(params), rho);
}

CrossoverFractions crossover_fractions(const SystemParams& params) {
    if (!common_mode_active(params))
        throw ModeError("crossover fractions require common-reservoir mode");
    const SteadyDecomposition d = steady_chr(params, 1.0);
    const Liouvillian gen(params);
    const HeatReport h1 = heat_report(gen, d.rho1);
    const HeatReport h2 = heat_report(gen, d.rho2);

    const double den_d = h1.q_l_direct - h2.q_l_direct;
    const double den_c = h1.q_l_direct + h2.q_l_crossing;
    if (std::abs(den_d) < kZeroCurrent || std::abs(den_c) < kZeroCurrent)
        throw DegenerateDenominator("crossover fraction denominator vanishes");

    CrossoverFractions f;
    f.p_d = h1.q_l_direct / den_d;
    f.p_c = h1.q_l_direct / den_c;
    f.p_d_in_range = f.p_d >= 0.0 && f.p_d <= 1.0;
    f.p_c_in_range = f.p_c >= 0.0 && f.p_c <= 1.0;
    return f;
}

double rectification_factor(double q_forward, double q_reverse, bool* defined) {
    const double af = std::abs(q_forward);
    const double ar = std::abs(q_reverse);
    const double m = std::max(af, ar);
    const bool ok = m >= kZeroCurrent;
    if (defined) *defined = ok;
    return ok ? std::abs(af - ar) / m : 0.0;
}

RectificationResult rectification(const SystemParams& params, double p) {
    const SystemParams reversed = params.swapped_temperatures();
    const HeatReport fwd = heat_report(params, steady_state(params, p));
    const HeatReport rev = heat_report(reversed, steady_state(reversed, p));

    RectificationResult r;
    r.q_forward = fwd.q_l;
    r.q_reverse = rev.q_l;
    r.r = rectification_factor(fwd.q_l, rev.q_l, &r.defined);
    r.r_from_right = rectification_factor(fwd.q_r, rev.q_r);
    return r;
}

HeatReport analytic_heat_currents(const SystemParams& params, AnalyticState which) {
    const TransitionTable table = transition_table(params);
    Matrix8c rho = Matrix8c::Zero();
    bool common = false;
    switch (which) {
    case AnalyticState::Ihr: {
        if (common_mode_active(params))
            throw ModeError("analytic IHR currents requested in common-reservoir mode");
        const auto pops = ihr_tree_populations(params);
        for (int k = 0; k < kDim; ++k) rho(k, k) = pops[k];
        break;
    }
    case AnalyticState::Rho1:
    case AnalyticState::Rho2:
        if (!common_mode_active(params))
            throw ModeError("analytic rho1/rho2 currents require common-reservoir mode");
        rho = (which == AnalyticState::Rho1 ? rho1_closed_form(params) : rho2_closed_form(params)).matrix();
        common = true;
        break;
    }
    const double qa = direct_current(params, table, rho, Qubit::A);
    const double qb = direct_current(params, table, rho, Qubit::B);
    const double qc = direct_current(params, table, rho, Qubit::C);
    const double qx = common ? crossing_current(params, table, rho) : 0.0;
    return assemble(qa, qb, qc, qx, common);
}

double printed_zero_right_channel_current(const SystemParams& params, const DensityMatrix& rho2) {
    const TransitionTable table = transition_table(params);
    const double w26 = table.entries[1].frequency;
    const double w48 = table.entries[3].frequency;
    return 4.0 * params.kappa * (w26 * rho2(1, 4).real() + w48 * rho2(3, 6).real());
}

} // namespace triq
