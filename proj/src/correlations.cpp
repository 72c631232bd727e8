#include "triq/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "triq/errors.hpp"
#include "triq/steady_state.hpp"

namespace triq {

namespace {

constexpr double kPatternTol = 1e-12;
constexpr double kDiscordClamp = 1e-8;

double log_scale(LogBase base) { return base == LogBase::Two ? 1.0 / std::numbers::ln2 : 1.0; }

// -sum mu log mu over the eigenvalues of an unnormalized block (natural log).
template <class Vec>
double raw_entropy(const Vec& eig) {
    double s = 0.0;
    for (int i = 0; i < eig.size(); ++i) {
        const double mu = eig(i);
        if (mu > 0.0) s -= mu * std::log(mu);
    }
    return s;
}

void check_floor(double min_eig) {
    if (min_eig < -kEigenvalueFloor)
        throw DomainError("entropy: eigenvalue " + std::to_string(min_eig) + " below -1e-12");
}

std::array<cd, 2> measurement_vector(double theta, double phi, int k) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    if (k == 0) return {cd(c, 0.0), std::polar(s, phi)};
    return {-std::polar(s, -phi), cd(c, 0.0)};
}

double natural_conditional_entropy(const Matrix8c& lr, double theta, double phi) {
    double total = 0.0;
    for (int k = 0; k < 2; ++k) {
        const auto n = measurement_vector(theta, phi, k);
        Matrix4c m;
        for (int l = 0; l < 4; ++l)
            for (int lp = 0; lp < 4; ++lp) {
                cd s = 0.0;
                for (int r = 0; r < 2; ++r)
                    for (int rp = 0; rp < 2; ++rp)
                        s += std::conj(n[r]) * lr(2 * l + r, 2 * lp + rp) * n[rp];
                m(l, lp) = s;
            }
        const Eigen::SelfAdjointEigenSolver<Matrix4c> es(m, Eigen::EigenvaluesOnly);
        const auto& eig = es.eigenvalues();
        const double p = eig.sum();
        total += raw_entropy(eig);
        if (p > 0.0) total += p * std::log(p);
    }
    return total;
}

// Block eigen-decomposition of a steady state of the printed form. Returns
// the joint weights P(l, r) with l in {++, u, v, --} and u, v the common
// eigenbasis of the {+-, -+} pair.
std::array<double, 8> block_weights(const DensityMatrix& rho) {
    const Matrix8c& m = rho.matrix();
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            if (i == j) continue;
            const bool allowed = (i == 1 && j == 4) || (i == 4 && j == 1) || (i == 3 && j == 6)
                              || (i == 6 && j == 3);
            if (!allowed && std::abs(m(i, j)) > kPatternTol)
                throw DomainError("closed-form correlation: state has coherences outside the block pattern");
        }
    if (std::abs(m(1, 4).imag()) > kPatternTol || std::abs(m(3, 6).imag()) > kPatternTol)
        throw DomainError("closed-form correlation: block coherences must be real");

    // Blocks {+-, -+} for r = + (levels 2, 5) and r = - (levels 4, 7).
    const std::array<Eigen::Matrix2d, 2> blocks{
        (Eigen::Matrix2d() << m(1, 1).real(), m(1, 4).real(), m(4, 1).real(), m(4, 4).real()).finished(),
        (Eigen::Matrix2d() << m(3, 3).real(), m(3, 6).real(), m(6, 3).real(), m(6, 6).real()).finished()};

    // Reference eigenbasis from the block farther from a multiple of identity.
    auto spread = [](const Eigen::Matrix2d& b) { return std::hypot(b(0, 0) - b(1, 1), 2.0 * b(0, 1)); };
    const int ref = spread(blocks[0]) >= spread(blocks[1]) ? 0 : 1;
    Eigen::Matrix2d u = Eigen::Matrix2d::Identity();
    if (spread(blocks[ref]) > 0.0) u = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(blocks[ref]).eigenvectors();

    std::array<double, 8> w{};
    const std::array<std::array<int, 2>, 2> corners{{{0, 5}, {2, 7}}};  // ++ and -- per block
    for (int r = 0; r < 2; ++r) {
        const Eigen::Matrix2d d = u.transpose() * blocks[r] * u;
        if (std::abs(d(0, 1)) > kPatternTol)
            throw DomainError("closed-form correlation: the two blocks have no common L eigenbasis");
        w[4 * r + 0] = m(corners[r][0], corners[r][0]).real();
        w[4 * r + 1] = d(0, 0);
        w[4 * r + 2] = d(1, 1);
        w[4 * r + 3] = m(corners[r][1], corners[r][1]).real();
    }
    return w;
}

// Orthonormal L basis from a Haar-random 4x4 unitary.
Matrix4c haar_unitary(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix4c z;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) z(i, j) = cd(n(rng), n(rng));
    const Eigen::HouseholderQR<Matrix4c> qr(z);
    Matrix4c q = qr.householderQ();
    const Matrix4c r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 4; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

// sum_k p_k S(rho_{R|k}) for measurement on L in the columns of `basis`.
double natural_conditional_entropy_l(const Matrix8c& lr, const Matrix4c& basis) {
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
        Matrix2c m = Matrix2c::Zero();
        for (int r = 0; r < 2; ++r)
            for (int rp = 0; rp < 2; ++rp)
                for (int l = 0; l < 4; ++l)
                    for (int lp = 0; lp < 4; ++lp)
                        m(r, rp) += std::conj(basis(l, k)) * lr(2 * l + r, 2 * lp + rp) * basis(lp, k);
        const Eigen::SelfAdjointEigenSolver<Matrix2c> es(m, Eigen::EigenvaluesOnly);
        const double p = es.eigenvalues().sum();
        total += raw_entropy(es.eigenvalues());
        if (p > 0.0) total += p * std::log(p);
    }
    return total;
}

} // namespace

double shannon_entropy(std::span<const double> probabilities, LogBase base) {
    double s = 0.0;
    for (double p : probabilities) {
        check_floor(p);
        if (p > 0.0) s -= p * std::log(p);
    }
    return s * log_scale(base);
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho, LogBase base) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& eig = es.eigenvalues();
    check_floor(eig.minCoeff());
    return raw_entropy(eig) * log_scale(base);
}

Matrix8c to_bipartite(const Matrix8c& storage) {
    Matrix8c out;
    for (int j = 0; j < 8; ++j)
        for (int i = 0; i < 8; ++i) out(kBipartitePermutation[i], kBipartitePermutation[j]) = storage(i, j);
    return out;
}

Matrix8c from_bipartite(const Matrix8c& bipartite) {
    // The permutation is its own inverse.
    return to_bipartite(bipartite);
}

Matrix4c partial_trace_r(const Matrix8c& lr) {
    Matrix4c out;
    for (int l = 0; l < 4; ++l)
        for (int lp = 0; lp < 4; ++lp) out(l, lp) = lr(2 * l, 2 * lp) + lr(2 * l + 1, 2 * lp + 1);
    return out;
}

Matrix2c partial_trace_l(const Matrix8c& lr) {
    Matrix2c out = Matrix2c::Zero();
    for (int r = 0; r < 2; ++r)
        for (int rp = 0; rp < 2; ++rp)
            for (int l = 0; l < 4; ++l) out(r, rp) += lr(2 * l + r, 2 * l + rp);
    return out;
}

Matrix8c partial_transpose_r(const Matrix8c& lr) {
    Matrix8c out;
    for (int l = 0; l < 4; ++l)
        for (int lp = 0; lp < 4; ++lp)
            for (int r = 0; r < 2; ++r)
                for (int rp = 0; rp < 2; ++rp) out(2 * l + r, 2 * lp + rp) = lr(2 * l + rp, 2 * lp + r);
    return out;
}

BipartiteView BipartiteView::from_bipartite(const Matrix8c& rho_lr) {
    BipartiteView v;
    v.rho_lr = rho_lr;
    v.rho_l = partial_trace_r(rho_lr);
    v.rho_r = partial_trace_l(rho_lr);
    return v;
}

BipartiteView BipartiteView::from_state(const DensityMatrix& rho) {
    return from_bipartite(to_bipartite(rho.matrix()));
}

double mutual_information(const BipartiteView& v, LogBase base) {
    return von_neumann_entropy(v.rho_l, base) + von_neumann_entropy(v.rho_r, base)
         - von_neumann_entropy(v.rho_lr, base);
}

double conditional_entropy(const BipartiteView& v, double theta, double phi, LogBase base) {
    return natural_conditional_entropy(v.rho_lr, theta, phi) * log_scale(base);
}

std::vector<double> measurement_grid(const BipartiteView& v, const MeasurementOptions& opts, LogBase base) {
    if (opts.theta_points < 2 || opts.phi_points < 1)
        throw DomainError("measurement grid needs at least 2 theta and 1 phi points");
    const int nt = opts.theta_points;
    const int np = opts.phi_points;
    const long n = static_cast<long>(nt) * np;
    std::vector<double> out(static_cast<std::size_t>(n));
    const double dt = std::numbers::pi / (nt - 1);
    const double dp = 2.0 * std::numbers::pi / np;
    const double scale = log_scale(base);
    if (opts.execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long idx = 0; idx < n; ++idx)
            out[idx] = natural_conditional_entropy(v.rho_lr, dt * (idx / np), dp * (idx % np)) * scale;
    } else {
        for (long idx = 0; idx < n; ++idx)
            out[idx] = natural_conditional_entropy(v.rho_lr, dt * (idx / np), dp * (idx % np)) * scale;
    }
    return out;
}

ClassicalCorrelation classical_correlation(const BipartiteView& v, const MeasurementOptions& opts,
                                           LogBase base) {
    const std::vector<double> grid = measurement_grid(v, opts, base);
    // First minimum by value; ties resolve to the lowest index.
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[best]) best = i;

    const int np = opts.phi_points;
    const double dt = std::numbers::pi / (opts.theta_points - 1);
    double theta = dt * static_cast<double>(best / np);
    double phi = 2.0 * std::numbers::pi / np * static_cast<double>(best % np);
    double f = grid[best];

    // Compass search: best of the four axis moves, halve the step on failure.
    double h = dt;
    while (h >= opts.step_tol) {
        const std::array<std::array<double, 2>, 4> moves{{{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}}};
        double fb = f;
        int mb = -1;
        for (int m = 0; m < 4; ++m) {
            const double fm = conditional_entropy(v, theta + moves[m][0], phi + moves[m][1], base);
            if (fm < fb) {
                fb = fm;
                mb = m;
            }
        }
        if (mb < 0) {
            h *= 0.5;
        } else {
            theta += moves[mb][0];
            phi += moves[mb][1];
            f = fb;
        }
    }

    ClassicalCorrelation c;
    c.grid_index = best;
    c.theta = theta;
    c.phi = phi;
    c.min_conditional_entropy = f;
    c.value = von_neumann_entropy(v.rho_l, base) - f;
    return c;
}

double quantum_discord(const BipartiteView& v, const MeasurementOptions& opts, LogBase base) {
    const double q = mutual_information(v, base) - classical_correlation(v, opts, base).value;
    return (q < 0.0 && q > -kDiscordClamp) ? 0.0 : q;
}

double negativity(const BipartiteView& v) {
    const Eigen::SelfAdjointEigenSolver<Matrix8c> es(partial_transpose_r(v.rho_lr), Eigen::EigenvaluesOnly);
    double n = 0.0;
    for (int i = 0; i < 8; ++i)
        if (es.eigenvalues()(i) < 0.0) n -= es.eigenvalues()(i);
    return n;
}

CorrelationReport correlation_report(const DensityMatrix& rho, const MeasurementOptions& opts, LogBase base) {
    const BipartiteView v = BipartiteView::from_state(rho);
    CorrelationReport r;
    r.s_l = von_neumann_entropy(v.rho_l, base);
    r.s_r = von_neumann_entropy(v.rho_r, base);
    r.s_lr = von_neumann_entropy(v.rho_lr, base);
    r.mutual_information = r.s_l + r.s_r - r.s_lr;
    r.classical = classical_correlation(v, opts, base).value;
    const double q = r.mutual_information - r.classical;
    r.discord = (q < 0.0 && q > -kDiscordClamp) ? 0.0 : q;
    r.negativity = negativity(v);
    return r;
}

double mutual_information_closed_form(const DensityMatrix& rho, LogBase base) {
    const auto w = block_weights(rho);
    const std::array<double, 2> pr{w[0] + w[1] + w[2] + w[3], w[4] + w[5] + w[6] + w[7]};
    const std::array<double, 4> pl{w[0] + w[4], w[1] + w[5], w[2] + w[6], w[3] + w[7]};
    return shannon_entropy(pl, base) + shannon_entropy(pr, base) - shannon_entropy(w, base);
}

double printed_correlation_expression(const DensityMatrix& rho, LogBase base) {
    return shannon_entropy(block_weights(rho), base);
}

double asymmetry_from(double i_forward, double i_reverse, bool* defined) {
    const double m = std::max(i_forward, i_reverse);
    const bool ok = m >= 1e-16;
    if (defined) *defined = ok;
    return ok ? std::abs(std::abs(i_forward) - std::abs(i_reverse)) / m : 0.0;
}

AsymmetryResult asymmetry_factor(const SystemParams& params, double p, LogBase base) {
    const SystemParams reversed = params.swapped_temperatures();
    AsymmetryResult r;
    r.i_forward = mutual_information(BipartiteView::from_state(steady_state(params, p)), base);
    r.i_reverse = mutual_information(BipartiteView::from_state(steady_state(reversed, p)), base);
    r.a = asymmetry_from(r.i_forward, r.i_reverse, &r.defined);
    return r;
}

double discord_l_side_upper_bound(const BipartiteView& v, int samples, std::uint64_t seed, LogBase base) {
    std::vector<Matrix4c> bases;
    bases.push_back(Matrix4c::Identity());
    Matrix4c bell = Matrix4c::Identity();
    const double s = std::numbers::sqrt2 / 2.0;
    bell(1, 1) = s;
    bell(2, 1) = s;
    bell(1, 2) = s;
    bell(2, 2) = -s;
    bases.push_back(bell);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < samples; ++i) bases.push_back(haar_unitary(rng));

    double best = natural_conditional_entropy_l(v.rho_lr, bases[0]);
    for (std::size_t i = 1; i < bases.size(); ++i)
        best = std::min(best, natural_conditional_entropy_l(v.rho_lr, bases[i]));
    const double c = von_neumann_entropy(v.rho_r, base) - best * log_scale(base);
    const double q = mutual_information(v, base) - c;
    return (q < 0.0 && q > -kDiscordClamp) ? 0.0 : q;
}

} // namespace triq
