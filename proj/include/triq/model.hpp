// model.hpp: physical parameters, closed-form spectrum, transition table,
// bath spectral densities and the transition-cycle graph of the
// three-qubit triangle (A and C on the left reservoir, B on the right).
//
// All quantities are dimensionless in units of omega_0 = 1 (hbar = k_B = 1).
// Levels are 0-based internally: level k <-> |k+1>, with
// k = 4*a + 2*b + c and a,b,c = 0 for spin up (+), 1 for spin down (-).

#pragma once

#include <array>
#include <string>
#include <vector>

namespace triq {

enum class Qubit { A = 0, B = 1, C = 2 };
enum class Reservoir { Left, Right };

// Auto: crossing dissipation iff the crossing condition holds.
enum class DissipationMode { Auto, ForceIndependent, ForceCommon };

const char* to_string(Qubit q);
const char* to_string(DissipationMode m);
DissipationMode parse_mode(const std::string& s);

inline constexpr double kDegeneracyTol = 1e-12;

struct SystemParams {
    double omega_a = 3.0;
    double omega_b = 5.0;
    double omega_c = 3.0;
    double g_ab = 0.1;
    double g_bc = 0.1;
    double g_ac = 0.1;
    double kappa = 1e-3;
    double t_left = 100.0;
    double t_right = 21.0;
    DissipationMode mode = DissipationMode::Auto;

    // Throws DomainError / ModeError naming the violated invariant.
    void validate() const;

    // Same system with the two reservoir temperatures exchanged.
    SystemParams swapped_temperatures() const;

    bool operator==(const SystemParams&) const = default;
};

double temperature_of(const SystemParams& p, Qubit q);
Reservoir reservoir_of(Qubit q);

bool crossing_condition(const SystemParams& p);

// True when the crossing dissipator L_AC is part of the generator.
bool common_mode_active(const SystemParams& p);

// Spin (+1 up, -1 down) of qubit q in 0-based level k.
int spin(int level, Qubit q);

struct EigenSystem {
    std::array<double, 8> lambdas{};
};

// Closed-form energies of the diagonal Hamiltonian (no diagonalization).
EigenSystem eigenvalues(const SystemParams& p);

// One eigen-operator V = |to><from| of qubit `qubit`; frequency is the signed
// gap lambda_from - lambda_to. A negative frequency means `from` lies below
// `to`; the signed spectral function then assigns the absorption rate to V.
struct Transition {
    Qubit qubit;
    int from;
    int to;
    double frequency;
};

struct TransitionTable {
    std::array<Transition, 12> entries{};
    EigenSystem spectrum;
    bool degenerate = false;        // crossing condition holds
    bool has_negative_gap = false;  // some frequency <= 0 (sign-swapped rates)
    bool b_pair_degenerate = false; // B 2->4 and 5->7 share a gap (g_AB == g_BC)

    // Entries for qubit q, in the order of the printed table.
    std::array<Transition, 4> of(Qubit q) const;
};

// Order: A: 15 26 37 48, B: 13 24 57 68, C: 12 34 56 78 (1-based labels).
TransitionTable transition_table(const SystemParams& p);

// Partner C transition (index into TransitionTable::entries) of each A
// transition sharing its gap under the crossing condition: A15~C12, A26~C56,
// A37~C34, A48~C78.
inline constexpr std::array<std::array<int, 2>, 4> kCrossingPairs{{
    {0, 8}, {1, 10}, {2, 9}, {3, 11}}};

// B transitions 2->4 and 5->7 share a gap whenever g_AB == g_BC.
inline constexpr std::array<int, 2> kDegenerateBPair{5, 6};

double bose_occupation(double omega, double temperature);

// Signed bath function J(y): y > 0 absorption kappa*n(y),
// y < 0 emission kappa*(n(|y|)+1). Throws DomainError for y == 0.
double bath_rate(double kappa, double signed_omega, double temperature);

struct SpectralDensity {
    double j_plus = 0.0;   // J(+omega), absorption
    double j_minus = 0.0;  // J(-omega), emission
};

// Requires omega > 0, kappa > 0, temperature >= 0.
SpectralDensity spectral_density(double kappa, double omega, double temperature);

// ---------------------------------------------------------------- cycles

// Reduced level diagram: degenerate pairs {2,5} and {4,7} merged. Nodes are
// reported by their smallest 1-based label: 1, 2, 3, 4, 6, 8.
struct CycleEdge {
    int from_label;
    int to_label;
    Reservoir reservoir;
    double frequency;  // lambda_from - lambda_to
};

struct TransitionCycle {
    std::vector<int> labels;  // closed: front() == back()
    std::vector<CycleEdge> edges;
    bool uses_left = false;
    bool uses_right = false;
    double energy_sum = 0.0;    // sum of signed gaps around the loop (== 0)
    double heat_from_left = 0.0;  // energy absorbed from L per traversal
};

// Simple directed cycles (length >= 3) of the reduced diagram. Requires
// table.degenerate. `exclude` drops every transition of one qubit.
std::vector<TransitionCycle> enumerate_cycles(const TransitionTable& table);
std::vector<TransitionCycle> enumerate_cycles(const TransitionTable& table, Qubit exclude);

} // namespace triq
