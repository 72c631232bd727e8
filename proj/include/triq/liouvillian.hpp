// liouvillian.hpp: Lindblad generator of the three-qubit diode and a
// fixed-step RK4 integrator used as the brute-force steady-state oracle.
//
// The generator acts on dense 8x8 matrices:
//   d rho/dt = -i[H_S, rho] + L_A + L_B + L_C (+ L_AC in common mode).
// Every dissipator is stored as a list of JumpTerm records
//   r * (2 X rho Y^dag - {Y^dag X, rho}),  X = |a><b|, Y = |c><d|,
// so direct terms have X == Y and crossing terms pair two eigen-operators of
// equal gap. When g_AB == g_BC the two B transitions 2->4 and 5->7 share a
// gap and carry the same kind of cross term inside L_B.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "triq/model.hpp"
#include "triq/types.hpp"

namespace triq {

enum class Channel { Coherent = 0, A = 1, B = 2, C = 3, AC = 4 };
inline constexpr int kChannelCount = 5;

// Lab: literal generator. Rotating: interaction picture w.r.t. H_S, where the
// commutator drops out and every secular dissipator is unchanged.
enum class Frame { Lab, Rotating };

struct JumpTerm {
    Channel channel;
    double rate;
    int a, b, c, d;
};

struct GeneratorAction {
    Matrix8c drho_dt = Matrix8c::Zero();
    std::array<Matrix8c, kChannelCount> by_channel{};

    const Matrix8c& channel(Channel ch) const { return by_channel[static_cast<int>(ch)]; }
};

class Liouvillian {
public:
    explicit Liouvillian(const SystemParams& params);

    const SystemParams& params() const noexcept { return params_; }
    const TransitionTable& table() const noexcept { return table_; }
    const std::vector<JumpTerm>& terms() const noexcept { return terms_; }
    bool common_mode() const noexcept { return common_; }

    // out = L[rho] (overwrites out).
    void apply(const Matrix8c& rho, Matrix8c& out, Frame frame = Frame::Lab) const;
    Matrix8c apply(const Matrix8c& rho, Frame frame = Frame::Lab) const;

    // Contribution of a single channel.
    Matrix8c apply_channel(const Matrix8c& rho, Channel ch) const;

    GeneratorAction action(const Matrix8c& rho) const;

    // 64x64 matrix of the generator on column-major vec(rho).
    Eigen::MatrixXcd superoperator(Frame frame) const;

    // Max row sum of the dissipative part; bounds the spectral radius.
    double dissipative_norm_bound() const noexcept { return dissipative_bound_; }
    double spectral_width() const noexcept;

private:
    SystemParams params_;
    TransitionTable table_;
    bool common_ = false;
    std::vector<JumpTerm> terms_;
    double dissipative_bound_ = 0.0;
};

// Terms of L_mu (direct eigen-operators of one qubit; for B also the cross
// term of the pair 2->4, 5->7 when their gaps coincide).
std::vector<JumpTerm> dissipator_terms(const SystemParams& params, const TransitionTable& table, Qubit mu);
// Terms of L_AC. Throws ModeError outside common mode.
std::vector<JumpTerm> crossing_terms(const SystemParams& params, const TransitionTable& table);

// Accumulates sum of terms applied to rho into out.
void apply_terms(const std::vector<JumpTerm>& terms, const Matrix8c& rho, Matrix8c& out);

Matrix8c dissipator_single(const SystemParams& params, const TransitionTable& table,
                           const Matrix8c& rho, Qubit mu);
Matrix8c dissipator_crossing(const SystemParams& params, const TransitionTable& table,
                             const Matrix8c& rho);
GeneratorAction generator(const SystemParams& params, const Matrix8c& rho);

// ---------------------------------------------------------------- evolution

struct EvolveOptions {
    Frame frame = Frame::Lab;
    // Smallest eigenvalue is sampled every this many steps (and at the end).
    std::size_t positivity_stride = 1000;
};

struct EvolveResult {
    DensityMatrix rho;
    double max_positivity_violation = 0.0;  // max(0, -lambda_min) over samples
    std::size_t steps = 0;
    std::size_t renormalizations = 0;
};

// Default fixed step: min(0.01/omega_max, 0.1/kappa, 1/||D||) in the lab frame,
// min(0.1/kappa, 1/||D||) in the rotating frame.
double default_time_step(const Liouvillian& gen, Frame frame);

// Classical RK4 with fixed step; the final step is shortened to land exactly
// on t_final. Throws StepInstability if the trace drifts by more than 1e-6.
EvolveResult evolve(const SystemParams& params, const DensityMatrix& rho0, double t_final,
                    double dt, const EvolveOptions& options = {});
EvolveResult evolve(const Liouvillian& gen, const DensityMatrix& rho0, double t_final,
                    double dt, const EvolveOptions& options = {});

struct SteadyEvolveOptions {
    double t_final = 0.0;  // 0 -> 50 / kappa
    double dt = 0.0;       // 0 -> default_time_step(gen, Rotating)
    double residual_tol = 1e-10;
};

struct SteadyEvolveResult {
    DensityMatrix rho;  // lab frame
    double residual = 0.0;  // ||L[rho]||_max
    bool converged = false;
    std::size_t steps = 0;
    double t_final = 0.0;
};

// Long-time evolution in the rotating frame, mapped back to the lab frame.
SteadyEvolveResult evolve_to_steady(const SystemParams& params, const DensityMatrix& rho0,
                                    const SteadyEvolveOptions& options = {});

} // namespace triq
