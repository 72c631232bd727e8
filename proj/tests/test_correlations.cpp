#include "test_main.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "reference.hpp"
#include "triq/correlations.hpp"
#include "triq/errors.hpp"
#include "triq/steady_state.hpp"

using namespace triq;

namespace {

int storage_index(int a, int b, int c) { return 4 * a + 2 * b + c; }

// Storage-order state from an L (A, C) operator and an R (B) operator.
Matrix8c product_state(const Matrix4c& l, const Matrix2c& r) {
    Matrix8c m;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int ap = 0; ap < 2; ++ap)
                    for (int bp = 0; bp < 2; ++bp)
                        for (int cp = 0; cp < 2; ++cp)
                            m(storage_index(a, b, c), storage_index(ap, bp, cp)) =
                                l(2 * a + c, 2 * ap + cp) * r(b, bp);
    return m;
}

// Pure state sum_{a,b} psi[a][b] |a, b, c=+> in storage order.
Matrix8c ab_pure_state(const std::array<std::array<cd, 2>, 2>& psi) {
    Eigen::Matrix<cd, 8, 1> v = Eigen::Matrix<cd, 8, 1>::Zero();
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) v(storage_index(a, b, 0)) = psi[a][b];
    return v * v.adjoint();
}

SystemParams random_ihr(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> w(1.0, 6.0), g(-0.4, 0.4), T(0.3, 60.0);
    SystemParams p;
    p.omega_a = w(rng);
    p.omega_b = w(rng);
    p.omega_c = w(rng);
    p.g_ab = g(rng);
    p.g_bc = g(rng);
    p.g_ac = g(rng);
    p.t_left = T(rng);
    p.t_right = T(rng);
    return p;
}

SystemParams random_chr(std::mt19937_64& rng) {
    SystemParams p = random_ihr(rng);
    p.omega_c = p.omega_a;
    p.g_bc = p.g_ab;
    return p;
}

MeasurementOptions coarse() {
    MeasurementOptions o;
    o.theta_points = 16;
    o.phi_points = 32;
    return o;
}

} // namespace

TEST_CASE("entropies") {
    CHECK(std::abs(von_neumann_entropy(DensityMatrix::basis_state(3).matrix())) < 1e-15);
    CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed().matrix()) == doctest::Approx(3.0).epsilon(1e-14));
    Matrix8c half = Matrix8c::Zero();
    half(0, 0) = half(1, 1) = 0.5;
    CHECK(von_neumann_entropy(half) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(von_neumann_entropy(half, LogBase::E) == doctest::Approx(std::numbers::ln2).epsilon(1e-14));
    const std::array<double, 3> p{0.5, 0.25, 0.25};
    CHECK(shannon_entropy(p) == doctest::Approx(1.5).epsilon(1e-15));
    const std::array<double, 2> tiny_negative{1.0, -1e-13};
    CHECK(shannon_entropy(tiny_negative) == 0.0);
    const std::array<double, 2> negative{1.1, -0.1};
    CHECK_THROWS_AS(shannon_entropy(negative), DomainError);
}

TEST_CASE("bipartite permutation matches hand-computed partial traces") {
    CHECK(kBipartitePermutation == std::array<int, 8>{0, 2, 1, 3, 4, 6, 5, 7});
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                const auto v = BipartiteView::from_state(DensityMatrix::basis_state(storage_index(a, b, c)));
                CHECK(std::abs(v.rho_l(2 * a + c, 2 * a + c) - 1.0) < 1e-15);
                CHECK(std::abs(v.rho_r(b, b) - 1.0) < 1e-15);
            }

    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        const Matrix8c rho = ref::random_state(rng).matrix();
        const auto v = BipartiteView::from_state(DensityMatrix::unchecked(rho));
        // Trace over B and over (A, C) straight from the storage index.
        Matrix4c l = Matrix4c::Zero();
        Matrix2c r = Matrix2c::Zero();
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c)
                for (int ap = 0; ap < 2; ++ap)
                    for (int cp = 0; cp < 2; ++cp)
                        for (int b = 0; b < 2; ++b)
                            l(2 * a + c, 2 * ap + cp) += rho(storage_index(a, b, c), storage_index(ap, b, cp));
        for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) r(b, bp) += rho(storage_index(a, b, c), storage_index(a, bp, c));
        CHECK((v.rho_l - l).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((v.rho_r - r).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((from_bipartite(v.rho_lr) - rho).cwiseAbs().maxCoeff() == 0.0);
        // Partial transpose is an involution and keeps the trace.
        CHECK((partial_transpose_r(partial_transpose_r(v.rho_lr)) - v.rho_lr).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(partial_transpose_r(v.rho_lr).trace() - 1.0) < 1e-13);
    }
}

TEST_CASE("product states carry no correlation") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 5; ++i) {
        const Matrix8c full = ref::random_state(rng).matrix();
        const auto v0 = BipartiteView::from_state(DensityMatrix::unchecked(full));
        const Matrix8c prod = product_state(v0.rho_l, v0.rho_r);
        const CorrelationReport r = correlation_report(DensityMatrix::unchecked(prod), coarse());
        CHECK(std::abs(r.mutual_information) < 1e-12);
        CHECK(std::abs(r.classical) < 1e-8);
        CHECK(r.discord < 1e-8);
        CHECK(r.negativity < 1e-14);
    }
}

TEST_CASE("perfect classical correlation between A and B") {
    Matrix8c m = Matrix8c::Zero();
    m(storage_index(0, 0, 0), storage_index(0, 0, 0)) = 0.5;
    m(storage_index(1, 1, 0), storage_index(1, 1, 0)) = 0.5;
    const CorrelationReport r = correlation_report(DensityMatrix::from_matrix(m));
    CHECK(r.mutual_information == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.classical == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.discord < 1e-12);
    CHECK(r.negativity < 1e-15);
}

TEST_CASE("Bell state between A and B") {
    const double s = std::numbers::sqrt2 / 2.0;
    const auto rho = DensityMatrix::from_matrix(ab_pure_state({{{s, 0.0}, {0.0, s}}}));
    const CorrelationReport r = correlation_report(rho);
    CHECK(r.mutual_information == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.classical == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.discord == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.negativity == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(r.s_lr) < 1e-12);

    // A rotated Bell state whose optimal direction is off the grid.
    const cd ph = std::polar(1.0, 0.3);
    const auto tilted = DensityMatrix::from_matrix(ab_pure_state({{{s, 0.0}, {0.0, s * ph}}}));
    const double q = quantum_discord(BipartiteView::from_state(tilted));
    CHECK(q == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("measurement objective is symmetric under n -> -n") {
    std::mt19937_64 rng(21);
    const auto v = BipartiteView::from_state(ref::random_state(rng));
    for (double th : {0.1, 0.7, 2.0})
        for (double ph : {0.0, 1.3, 4.0})
            CHECK(conditional_entropy(v, th, ph)
                  == doctest::Approx(conditional_entropy(v, std::numbers::pi - th, ph + std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("parallel and serial measurement grids are identical") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 3; ++i) {
        const auto v = BipartiteView::from_state(ref::random_state(rng));
        MeasurementOptions par;
        MeasurementOptions ser;
        ser.execution = Execution::Serial;
        CHECK(measurement_grid(v, par) == measurement_grid(v, ser));
        const ClassicalCorrelation a = classical_correlation(v, par);
        const ClassicalCorrelation b = classical_correlation(v, ser);
        CHECK(a.value == b.value);
        CHECK(a.grid_index == b.grid_index);
        CHECK(a.theta == b.theta);
    }
}

TEST_CASE("grid refinement reaches the continuous minimum") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 4; ++i) {
        const auto v = BipartiteView::from_state(ref::random_state(rng));
        const ClassicalCorrelation c = classical_correlation(v);
        const double f = c.min_conditional_entropy;
        for (double d : {1e-3, 1e-2})
            for (const auto& [dt, dp] : std::array<std::array<double, 2>, 4>{{{d, 0}, {-d, 0}, {0, d}, {0, -d}}})
                CHECK(conditional_entropy(v, c.theta + dt, c.phi + dp) >= f - 1e-12);
        const auto grid = measurement_grid(v, MeasurementOptions{});
        CHECK(f <= *std::min_element(grid.begin(), grid.end()));
        CHECK(c.value <= mutual_information(v) + 1e-8);
        CHECK(c.value >= -1e-12);
    }
}

TEST_CASE("entropy inequalities on random states") {
    std::mt19937_64 rng(55);
    for (int i = 0; i < 20; ++i) {
        const auto v = BipartiteView::from_state(ref::random_state(rng));
        const double sl = von_neumann_entropy(v.rho_l);
        const double sr = von_neumann_entropy(v.rho_r);
        const double slr = von_neumann_entropy(v.rho_lr);
        CHECK(slr <= sl + sr + 1e-12);
        CHECK(std::abs(sl - sr) <= slr + 1e-12);
        CHECK(negativity(v) >= 0.0);
    }
}

TEST_CASE("steady states are classically correlated only") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const bool common = i % 2;
        const SystemParams p = common ? random_chr(rng) : random_ihr(rng);
        const DensityMatrix rho = steady_state(p, frac(rng));
        const CorrelationReport r = correlation_report(rho);
        INFO("point ", i, " common ", common);
        CHECK(r.discord <= 1e-6);
        CHECK(r.negativity <= 1e-12);
        CHECK(std::abs(r.classical - r.mutual_information) <= 1e-6);
        CHECK(std::abs(r.classical - mutual_information_closed_form(rho)) <= 1e-6);
        CHECK(std::abs(r.mutual_information - mutual_information_closed_form(rho)) <= 1e-12);
        CHECK(r.s_lr <= r.s_l + r.s_r + 1e-12);
        CHECK(std::abs(r.s_l - r.s_r) <= r.s_lr + 1e-12);
        CHECK(r.mutual_information >= -1e-14);
        CHECK(discord_l_side_upper_bound(BipartiteView::from_state(rho), 32) <= 1e-6);
    }
}

TEST_CASE("printed correlation expression is the joint entropy") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        const SystemParams p = (i % 2) ? random_chr(rng) : random_ihr(rng);
        const DensityMatrix rho = steady_state(p, 0.4);
        const auto v = BipartiteView::from_state(rho);
        CHECK(printed_correlation_expression(rho) == doctest::Approx(von_neumann_entropy(v.rho_lr)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(mutual_information_closed_form(DensityMatrix::from_matrix(ab_pure_state(
                        {{{std::numbers::sqrt2 / 2, 0.0}, {0.0, std::numbers::sqrt2 / 2}}}))),
                    DomainError);
}

TEST_CASE("a local unitary on L leaves the correlations unchanged") {
    SystemParams p;
    const DensityMatrix rho = steady_state(p, 0.7);
    // Rotate the {+-, -+} pair of L onto {psi-, psi+}, identity on ++ and --.
    const double s = std::numbers::sqrt2 / 2.0;
    Matrix4c u = Matrix4c::Identity();
    u(1, 1) = -s;
    u(2, 1) = s;
    u(1, 2) = s;
    u(2, 2) = s;
    const Matrix8c ul = product_state(u, Matrix2c::Identity());
    const DensityMatrix rotated = DensityMatrix::unchecked(ul * rho.matrix() * ul.adjoint());
    const CorrelationReport a = correlation_report(rho);
    const CorrelationReport b = correlation_report(rotated);
    CHECK(std::abs(a.mutual_information - b.mutual_information) <= 1e-10);
    CHECK(std::abs(a.classical - b.classical) <= 1e-10);
    // In the rotated frame the state is diagonal.
    Matrix8c off = rotated.matrix();
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("asymmetry factor") {
    bool defined = true;
    CHECK(asymmetry_from(0.0, 0.0, &defined) == 0.0);
    CHECK_FALSE(defined);
    CHECK(asymmetry_from(0.2, 0.1, &defined) == doctest::Approx(0.5));
    CHECK(defined);

    SUBCASE("equal temperatures") {
        SystemParams p;
        p.t_left = p.t_right = 4.0;
        const AsymmetryResult a = asymmetry_factor(p);
        CHECK(a.a == 0.0);
        CHECK(a.i_forward > 1e-6);
        CHECK(a.i_forward == a.i_reverse);
    }
    SUBCASE("nonzero at the Fig. 7 parameters and independent of the log base") {
        for (double w : {1.0, 5.0}) {
            SystemParams p;
            p.omega_a = p.omega_c = w;
            p.omega_b = 6.0 - w;
            p.t_right = 1.0;
            p.t_left = 3.0;
            const AsymmetryResult a2 = asymmetry_factor(p, 1.0, LogBase::Two);
            const AsymmetryResult ae = asymmetry_factor(p, 1.0, LogBase::E);
            CHECK(a2.defined);
            CHECK(a2.a > 1e-3);
            CHECK(std::abs(a2.a - ae.a) <= 1e-12);
            CHECK(ae.i_forward == doctest::Approx(a2.i_forward * std::numbers::ln2).epsilon(1e-13));
        }
    }
}

TEST_CASE("Gibbs state correlations") {
    SystemParams p;
    p.omega_c = 2.0;
    p.t_left = p.t_right = 3.0;
    const auto es = eigenvalues(p);
    Matrix8c g = Matrix8c::Zero();
    double z = 0.0;
    for (int k = 0; k < 8; ++k) z += std::exp(-es.lambdas[k] / 3.0);
    for (int k = 0; k < 8; ++k) g(k, k) = std::exp(-es.lambdas[k] / 3.0) / z;
    const CorrelationReport a = correlation_report(steady_ihr(p));
    const CorrelationReport b = correlation_report(DensityMatrix::from_matrix(g));
    CHECK(std::abs(a.mutual_information - b.mutual_information) < 1e-10);
    CHECK(std::abs(a.classical - b.classical) < 1e-10);
    CHECK(a.mutual_information > 0.0);
}
