// validation.hpp: the oracle triangle. Each random parameter point is solved
// three ways (closed-form / spanning-tree populations, the null space of the
// coefficient matrix, and long-time RK4 evolution) and the elementwise
// disagreements are recorded together with the energy-conservation residual.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "triq/model.hpp"
#include "triq/types.hpp"

namespace triq {

// omega in [1, 6], couplings in [-0.4, 0.4], kappa in [1e-4, 1e-2],
// temperatures in [0.3, 80]. The common variant imposes the crossing condition.
SystemParams random_independent_point(std::mt19937_64& rng);
SystemParams random_common_point(std::mt19937_64& rng);

// Ginibre-distributed random state.
DensityMatrix random_density_matrix(std::mt19937_64& rng);

struct OracleOptions {
    int points_per_mode = 50;
    std::uint64_t seed = 20240611;
    double tolerance = 1e-8;       // elementwise agreement of the three legs
    double conservation_tol = 1e-12;  // |q_L + q_R| / max(|q_L|, kappa)
};

struct OracleSample {
    SystemParams params;
    bool common = false;
    double p = 1.0;                // subspace-2 weight of the initial state
    DensityMatrix rho;             // null-space leg
    double analytic_vs_null = 0.0;
    double null_vs_rk4 = 0.0;
    double analytic_vs_rk4 = 0.0;
    double rk4_residual = 0.0;
    double q_l = 0.0;
    double q_r = 0.0;
    double conservation = 0.0;     // |q_L + q_R| / max(|q_L|, kappa)
};

struct OracleReport {
    std::vector<OracleSample> samples;
    double max_disagreement = 0.0;
    double max_conservation = 0.0;
    bool agreement_ok = false;
    bool conservation_ok = false;
    bool passed() const { return agreement_ok && conservation_ok; }
};

// Independent-mode points first, then common-mode points.
OracleReport oracle_triangle(const OracleOptions& options = {});

} // namespace triq
