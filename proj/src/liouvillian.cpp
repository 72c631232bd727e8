#include "triq/liouvillian.hpp"

#include <algorithm>
#include <cmath>

#include "triq/errors.hpp"

namespace triq {

namespace {

constexpr cd kI{0.0, 1.0};

double emission_rate(const SystemParams& p, const Transition& t) {
    return bath_rate(p.kappa, -t.frequency, temperature_of(p, t.qubit));
}

double absorption_rate(const SystemParams& p, const Transition& t) {
    return bath_rate(p.kappa, t.frequency, temperature_of(p, t.qubit));
}

void add_direct(std::vector<JumpTerm>& out, Channel ch, const SystemParams& p, const Transition& t) {
    // V = |to><from| with J(-w); V^dag = |from><to| with J(+w).
    out.push_back({ch, emission_rate(p, t), t.to, t.from, t.to, t.from});
    out.push_back({ch, absorption_rate(p, t), t.from, t.to, t.from, t.to});
}

// Cross terms between two eigen-operators sharing a gap:
//   J(-w) [2 V1 rho V2^dag - {V2^dag V1, rho} + (1 <-> 2)]
// + J(+w) [2 V1^dag rho V2 - {V2 V1^dag, rho} + (1 <-> 2)]
void add_cross(std::vector<JumpTerm>& out, Channel ch, const SystemParams& p,
               const Transition& t1, const Transition& t2) {
    const double down = std::sqrt(emission_rate(p, t1) * emission_rate(p, t2));
    const double up = std::sqrt(absorption_rate(p, t1) * absorption_rate(p, t2));
    out.push_back({ch, down, t1.to, t1.from, t2.to, t2.from});
    out.push_back({ch, down, t2.to, t2.from, t1.to, t1.from});
    out.push_back({ch, up, t1.from, t1.to, t2.from, t2.to});
    out.push_back({ch, up, t2.from, t2.to, t1.from, t1.to});
}

Channel channel_of(Qubit q) {
    switch (q) {
    case Qubit::A: return Channel::A;
    case Qubit::B: return Channel::B;
    case Qubit::C: return Channel::C;
    }
    return Channel::A;
}

} // namespace

std::vector<JumpTerm> dissipator_terms(const SystemParams& params, const TransitionTable& table, Qubit mu) {
    std::vector<JumpTerm> out;
    const Channel ch = channel_of(mu);
    for (const auto& t : table.of(mu)) add_direct(out, ch, params, t);
    if (mu == Qubit::B && table.b_pair_degenerate) {
        add_cross(out, ch, params, table.entries[kDegenerateBPair[0]],
                  table.entries[kDegenerateBPair[1]]);
    }
    return out;
}

std::vector<JumpTerm> crossing_terms(const SystemParams& params, const TransitionTable& table) {
    if (!common_mode_active(params))
        throw ModeError("crossing dissipator requested outside common-reservoir mode");
    std::vector<JumpTerm> out;
    for (const auto& [ia, ic] : kCrossingPairs)
        add_cross(out, Channel::AC, params, table.entries[ia], table.entries[ic]);
    return out;
}

void apply_terms(const std::vector<JumpTerm>& terms, const Matrix8c& rho, Matrix8c& out) {
    for (const JumpTerm& t : terms) {
        const double r = t.rate;
        if (r == 0.0) continue;
        out(t.a, t.c) += 2.0 * r * rho(t.b, t.d);
        if (t.c == t.a) {
            for (int k = 0; k < kDim; ++k) {
                out(t.d, k) -= r * rho(t.b, k);
                out(k, t.b) -= r * rho(k, t.d);
            }
        }
    }
}

Liouvillian::Liouvillian(const SystemParams& params)
    : params_(params), table_(transition_table(params)), common_(common_mode_active(params)) {
    params_.validate();
    for (Qubit q : {Qubit::A, Qubit::B, Qubit::C}) {
        auto t = dissipator_terms(params_, table_, q);
        terms_.insert(terms_.end(), t.begin(), t.end());
    }
    if (common_) {
        auto t = crossing_terms(params_, table_);
        terms_.insert(terms_.end(), t.begin(), t.end());
    }
    const Eigen::MatrixXcd s = superoperator(Frame::Rotating);
    dissipative_bound_ = s.cwiseAbs().rowwise().sum().maxCoeff();
}

void Liouvillian::apply(const Matrix8c& rho, Matrix8c& out, Frame frame) const {
    if (frame == Frame::Lab) {
        const auto& lam = table_.spectrum.lambdas;
        for (int b = 0; b < kDim; ++b)
            for (int a = 0; a < kDim; ++a) out(a, b) = -kI * (lam[a] - lam[b]) * rho(a, b);
    } else {
        out.setZero();
    }
    apply_terms(terms_, rho, out);
}

Matrix8c Liouvillian::apply(const Matrix8c& rho, Frame frame) const {
    Matrix8c out;
    apply(rho, out, frame);
    return out;
}

Matrix8c Liouvillian::apply_channel(const Matrix8c& rho, Channel ch) const {
    Matrix8c out = Matrix8c::Zero();
    if (ch == Channel::Coherent) {
        const auto& lam = table_.spectrum.lambdas;
        for (int b = 0; b < kDim; ++b)
            for (int a = 0; a < kDim; ++a) out(a, b) = -kI * (lam[a] - lam[b]) * rho(a, b);
        return out;
    }
    for (const JumpTerm& t : terms_) {
        if (t.channel != ch) continue;
        apply_terms({t}, rho, out);
    }
    return out;
}

GeneratorAction Liouvillian::action(const Matrix8c& rho) const {
    GeneratorAction ga;
    for (int c = 0; c < kChannelCount; ++c) {
        ga.by_channel[c] = apply_channel(rho, static_cast<Channel>(c));
        ga.drho_dt += ga.by_channel[c];
    }
    return ga;
}

Eigen::MatrixXcd Liouvillian::superoperator(Frame frame) const {
    Eigen::MatrixXcd s(kDim * kDim, kDim * kDim);
    Matrix8c e = Matrix8c::Zero();
    Matrix8c out;
    for (int col = 0; col < kDim * kDim; ++col) {
        e.setZero();
        e(col % kDim, col / kDim) = 1.0;
        apply(e, out, frame);
        s.col(col) = Eigen::Map<const Eigen::Matrix<cd, 64, 1>>(out.data());
    }
    return s;
}

double Liouvillian::spectral_width() const noexcept {
    const auto& lam = table_.spectrum.lambdas;
    const auto [lo, hi] = std::minmax_element(lam.begin(), lam.end());
    return *hi - *lo;
}

Matrix8c dissipator_single(const SystemParams& params, const TransitionTable& table,
                           const Matrix8c& rho, Qubit mu) {
    Matrix8c out = Matrix8c::Zero();
    apply_terms(dissipator_terms(params, table, mu), rho, out);
    return out;
}

Matrix8c dissipator_crossing(const SystemParams& params, const TransitionTable& table,
                             const Matrix8c& rho) {
    Matrix8c out = Matrix8c::Zero();
    apply_terms(crossing_terms(params, table), rho, out);
    return out;
}

GeneratorAction generator(const SystemParams& params, const Matrix8c& rho) {
    return Liouvillian(params).action(rho);
}

// ---------------------------------------------------------------- evolution

double default_time_step(const Liouvillian& gen, Frame frame) {
    const double kappa = gen.params().kappa;
    double dt = 0.1 / kappa;
    if (gen.dissipative_norm_bound() > 0.0) dt = std::min(dt, 1.0 / gen.dissipative_norm_bound());
    if (frame == Frame::Lab && gen.spectral_width() > 0.0)
        dt = std::min(dt, 0.01 / gen.spectral_width());
    return dt;
}

namespace {

void rotate_to_lab(Matrix8c& rho, const EigenSystem& es, double t) {
    for (int b = 0; b < kDim; ++b)
        for (int a = 0; a < kDim; ++a) {
            if (a == b) continue;
            const double phase = -(es.lambdas[a] - es.lambdas[b]) * t;
            rho(a, b) *= cd(std::cos(phase), std::sin(phase));
        }
}

// Decayed coherences otherwise sink into subnormal range, where arithmetic
// is two orders of magnitude slower.
void flush_tiny(Matrix8c& rho) {
    for (int j = 0; j < kDim; ++j)
        for (int i = 0; i < kDim; ++i) {
            cd& x = rho(i, j);
            if (std::abs(x.real()) < 1e-250) x.real(0.0);
            if (std::abs(x.imag()) < 1e-250) x.imag(0.0);
        }
}

double positivity_violation(const Matrix8c& rho) {
    const Matrix8c h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix8c> es(h, Eigen::EigenvaluesOnly);
    return std::max(0.0, -es.eigenvalues().minCoeff());
}

} // namespace

EvolveResult evolve(const SystemParams& params, const DensityMatrix& rho0, double t_final,
                    double dt, const EvolveOptions& options) {
    return evolve(Liouvillian(params), rho0, t_final, dt, options);
}

EvolveResult evolve(const Liouvillian& gen, const DensityMatrix& rho0, double t_final,
                    double dt, const EvolveOptions& options) {
    if (!(dt > 0.0)) throw DomainError("evolve: dt must be > 0");
    if (!(t_final >= 0.0)) throw DomainError("evolve: t_final must be >= 0");

    EvolveResult result;
    Matrix8c rho = rho0.matrix();
    result.max_positivity_violation = positivity_violation(rho);
    if (t_final == 0.0) {
        result.rho = rho0;
        return result;
    }

    const Frame frame = options.frame;
    const std::size_t stride = std::max<std::size_t>(options.positivity_stride, 1);
    Matrix8c k1, k2, k3, k4, tmp;
    double t = 0.0;
    while (t < t_final) {
        const double h = std::min(dt, t_final - t);
        gen.apply(rho, k1, frame);
        tmp = rho + (0.5 * h) * k1;
        gen.apply(tmp, k2, frame);
        tmp = rho + (0.5 * h) * k2;
        gen.apply(tmp, k3, frame);
        tmp = rho + h * k3;
        gen.apply(tmp, k4, frame);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = (h < dt) ? t_final : t + h;
        ++result.steps;

        const cd tr = rho.trace();
        const double drift = std::abs(tr - 1.0);
        if (drift > 1e-6)
            throw StepInstability("evolve: trace drifted by " + std::to_string(drift)
                                  + "; reduce dt");
        if (drift > 1e-13) {
            rho /= tr.real();
            ++result.renormalizations;
        }
        if (result.steps % 64 == 0) flush_tiny(rho);
        if (result.steps % stride == 0)
            result.max_positivity_violation =
                std::max(result.max_positivity_violation, positivity_violation(rho));
    }
    if (frame == Frame::Rotating) rotate_to_lab(rho, gen.table().spectrum, t_final);
    result.max_positivity_violation =
        std::max(result.max_positivity_violation, positivity_violation(rho));
    result.rho = DensityMatrix::unchecked(rho);
    return result;
}

SteadyEvolveResult evolve_to_steady(const SystemParams& params, const DensityMatrix& rho0,
                                    const SteadyEvolveOptions& options) {
    const Liouvillian gen(params);
    const double t_final = options.t_final > 0.0 ? options.t_final : 50.0 / params.kappa;
    const double dt = options.dt > 0.0 ? options.dt : default_time_step(gen, Frame::Rotating);
    EvolveOptions eo;
    eo.frame = Frame::Rotating;
    eo.positivity_stride = 10000;
    const EvolveResult r = evolve(gen, rho0, t_final, dt, eo);

    SteadyEvolveResult out;
    out.rho = r.rho;
    out.steps = r.steps;
    out.t_final = t_final;
    out.residual = gen.apply(r.rho.matrix(), Frame::Lab).cwiseAbs().maxCoeff();
    out.converged = out.residual <= options.residual_tol;
    return out;
}

} // namespace triq
