#include "triq/steady_state.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "triq/errors.hpp"
#include "triq/liouvillian.hpp"

namespace triq {

namespace {

double j_up(const SystemParams& p, const Transition& t) {
    return bath_rate(p.kappa, t.frequency, temperature_of(p, t.qubit));
}

double j_down(const SystemParams& p, const Transition& t) {
    return bath_rate(p.kappa, -t.frequency, temperature_of(p, t.qubit));
}

const Eigen::Matrix2d kMPlus = (Eigen::Matrix2d() << 1, 0, 0, 0).finished();
const Eigen::Matrix2d kMMinus = (Eigen::Matrix2d() << 0, 0, 0, 1).finished();

Matrix8d kron3(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b, const Eigen::Matrix2d& c) {
    Matrix8d out;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            out(i, j) = a(i >> 2, j >> 2) * b((i >> 1) & 1, (j >> 1) & 1) * c(i & 1, j & 1);
    return out;
}

Eigen::Matrix2d block_of(const SystemParams& p, const Transition& t) {
    const double down = j_down(p, t);
    const double up = j_up(p, t);
    Eigen::Matrix2d m;
    m << -down, up, down, -up;
    return 2.0 * m;
}

void require_crossing(const SystemParams& params, const char* who) {
    if (!crossing_condition(params))
        throw ModeError(std::string(who) + ": requires the crossing condition");
}

// Reduced CHR vector -> full density matrix.
DensityMatrix chr_vector_to_density(const Eigen::Matrix<double, 8, 1>& v) {
    Matrix8c r = Matrix8c::Zero();
    r(0, 0) = v(0);
    r(1, 1) = r(4, 4) = v(1);
    r(2, 2) = v(2);
    r(3, 3) = r(6, 6) = v(3);
    r(5, 5) = v(4);
    r(7, 7) = v(5);
    r(1, 4) = r(4, 1) = v(6);
    r(3, 6) = r(6, 3) = v(7);
    return DensityMatrix::unchecked(r);
}

double weight_subspace1(const Eigen::Matrix<double, 8, 1>& v) {
    return (v(1) - v(6)) + (v(3) - v(7));
}

double weight_subspace2(const Eigen::Matrix<double, 8, 1>& v) {
    return v(0) + v(2) + v(4) + v(5) + (v(1) + v(6)) + (v(3) + v(7));
}

} // namespace

Eigen::Matrix2d rate_block(double kappa, double omega, double temperature) {
    Eigen::Matrix2d m;
    const double down = bath_rate(kappa, -omega, temperature);
    const double up = bath_rate(kappa, omega, temperature);
    m << -down, up, down, -up;
    return 2.0 * m;
}

CoefficientMatrixIHR build_M_ihr(const SystemParams& params) {
    const auto t = transition_table(params);
    const auto& e = t.entries;
    const auto& P = kMPlus;
    const auto& N = kMMinus;
    CoefficientMatrixIHR out;
    // A: 15 26 37 48
    out.m += kron3(block_of(params, e[0]), P, P) + kron3(block_of(params, e[1]), P, N)
             + kron3(block_of(params, e[2]), N, P) + kron3(block_of(params, e[3]), N, N);
    // B: 13 24 57 68
    out.m += kron3(P, block_of(params, e[4]), P) + kron3(P, block_of(params, e[5]), N)
             + kron3(N, block_of(params, e[6]), P) + kron3(N, block_of(params, e[7]), N);
    // C: 12 34 56 78
    out.m += kron3(P, P, block_of(params, e[8])) + kron3(P, N, block_of(params, e[9]))
             + kron3(N, P, block_of(params, e[10])) + kron3(N, N, block_of(params, e[11]));
    return out;
}

Matrix8d build_M_chr_left(const SystemParams& params) {
    require_crossing(params, "build_M_chr");
    const auto t = transition_table(params);
    // Gaps w+g+g_AC, w+g-g_AC, w-g+g_AC, w-g-g_AC.
    const double p12 = j_up(params, t.entries[0]), m12 = j_down(params, t.entries[0]);
    const double p26 = j_up(params, t.entries[1]), m26 = j_down(params, t.entries[1]);
    const double p34 = j_up(params, t.entries[2]), m34 = j_down(params, t.entries[2]);
    const double p48 = j_up(params, t.entries[3]), m48 = j_down(params, t.entries[3]);
    Matrix8d m;
    m << -4 * m12, 4 * p12, 0, 0, 0, 0, 4 * p12, 0,
         2 * m12, -2 * p12 - 2 * m26, 0, 0, 2 * p26, 0, -2 * p12 - 2 * m26, 0,
         0, 0, -4 * m34, 4 * p34, 0, 0, 0, 4 * p34,
         0, 0, 2 * m34, -2 * p34 - 2 * m48, 0, 2 * p48, 0, -2 * p34 - 2 * m48,
         0, 4 * m26, 0, 0, -4 * p26, 0, 4 * m26, 0,
         0, 0, 0, 4 * m48, 0, -4 * p48, 0, 4 * m48,
         2 * m12, -2 * p12 - 2 * m26, 0, 0, 2 * p26, 0, -2 * p12 - 2 * m26, 0,
         0, 0, 2 * m34, -2 * p34 - 2 * m48, 0, 2 * p48, 0, -2 * p34 - 2 * m48;
    return m;
}

Matrix8d build_M_chr_right(const SystemParams& params) {
    require_crossing(params, "build_M_chr");
    const auto t = transition_table(params);
    const auto& P = kMPlus;
    const auto& N = kMMinus;
    const Eigen::Matrix2d b13 = block_of(params, t.entries[4]);
    const Eigen::Matrix2d b24 = block_of(params, t.entries[5]);
    const Eigen::Matrix2d b68 = block_of(params, t.entries[7]);
    return kron3(P, b13, P) + kron3(P, b24, N) + kron3(N, N, b24) + kron3(N, P, b68);
}

CoefficientMatrixCHR build_M_chr(const SystemParams& params) {
    CoefficientMatrixCHR out;
    out.m = build_M_chr_left(params) + build_M_chr_right(params);
    return out;
}

NullSpace null_space(const Matrix8d& m, double rel_tol) {
    Eigen::JacobiSVD<Matrix8d> svd(m, Eigen::ComputeFullV);
    NullSpace ns;
    ns.singular_values = svd.singularValues();
    const double smax = ns.singular_values(0);
    const int n = static_cast<int>(ns.singular_values.size());
    for (int i = 0; i < n; ++i)
        if (ns.singular_values(i) <= rel_tol * smax) ++ns.dimension;
    ns.basis = svd.matrixV().rightCols(ns.dimension);
    return ns;
}

namespace {

// Iterative refinement of the stationary vector of a generator g whose
// columns sum to zero. The last equation is replaced by sum_k v_k = 1, the
// residual is accumulated in extended precision and the correction solved
// in double. Null-space vectors from the SVD carry errors of a few ulps in
// the small populations; heat currents are differences of much larger
// gain and loss terms and inherit that error amplified.
template <int N>
Eigen::Matrix<double, N, 1> refine_stationary(const Eigen::Matrix<double, N, N>& g,
                                              Eigen::Matrix<double, N, 1> v) {
    Eigen::Matrix<double, N, N> a = g;
    a.row(N - 1).setOnes();
    const Eigen::PartialPivLU<Eigen::Matrix<double, N, N>> lu(a);
    for (int it = 0; it < 2; ++it) {
        Eigen::Matrix<double, N, 1> r;
        for (int i = 0; i < N; ++i) {
            long double s = (i == N - 1) ? 1.0L : 0.0L;
            for (int j = 0; j < N; ++j) s -= static_cast<long double>(a(i, j)) * v(j);
            r(i) = static_cast<double>(s);
        }
        const Eigen::Matrix<double, N, 1> dv = lu.solve(r);
        if (!dv.allFinite()) break;
        v += dv;
    }
    return v;
}

// Reduced CHR matrix read off the generator itself: each reduced basis
// vector is pushed through L_A + L_B + L_C + L_AC and the same eight
// entries are read back. Agrees with M^C up to rounding of the rates.
Matrix8d generator_reduced_chr(const SystemParams& params) {
    const Liouvillian gen(params);
    Matrix8d m;
    Eigen::Matrix<double, 8, 1> e;
    for (int c = 0; c < 8; ++c) {
        e.setZero();
        e(c) = 1.0;
        const Matrix8c out = gen.apply(chr_vector_to_density(e).matrix(), Frame::Rotating);
        m.col(c) << out(0, 0).real(), out(1, 1).real(), out(2, 2).real(), out(3, 3).real(),
            out(5, 5).real(), out(7, 7).real(), out(1, 4).real(), out(3, 6).real();
    }
    return m;
}

// Refinement of rho2 in reduced coordinates against the generator, with the
// subspace weights pinned to 0 and 1 as two extra equations.
Eigen::Matrix<double, 8, 1> refine_rho2(const SystemParams& params, Eigen::Matrix<double, 8, 1> v) {
    Eigen::Matrix<double, 10, 8> a;
    a.topRows<8>() = generator_reduced_chr(params);
    a.row(8) << 0, 1, 0, 1, 0, 0, -1, -1;
    a.row(9) << 1, 1, 1, 1, 1, 1, 1, 1;
    Eigen::Matrix<double, 10, 1> b = Eigen::Matrix<double, 10, 1>::Zero();
    b(9) = 1.0;
    const Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 10, 8>> qr(a);
    for (int it = 0; it < 2; ++it) {
        Eigen::Matrix<double, 10, 1> r;
        for (int i = 0; i < 10; ++i) {
            long double s = b(i);
            for (int j = 0; j < 8; ++j) s -= static_cast<long double>(a(i, j)) * v(j);
            r(i) = static_cast<double>(s);
        }
        const Eigen::Matrix<double, 8, 1> dv = qr.solve(r);
        if (!dv.allFinite()) break;
        v += dv;
    }
    return v;
}

} // namespace

DensityMatrix steady_ihr(const SystemParams& params) {
    params.validate();
    const Matrix8d m = build_M_ihr(params).m;
    Eigen::JacobiSVD<Matrix8d> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s(6) < 1e-10 * s(0)) {
        std::ostringstream os;
        os << "steady_ihr: null space is not one-dimensional (sigma_7/sigma_1 = " << s(6) / s(0) << ")";
        throw DegenerateNullSpace(os.str(), s(7) < 1e-10 * s(0) ? 2 : 1);
    }
    Eigen::Matrix<double, 8, 1> v = svd.matrixV().col(7);
    v /= v.sum();
    v = refine_stationary<8>(m, v);
    Matrix8c r = Matrix8c::Zero();
    for (int k = 0; k < 8; ++k) r(k, k) = v(k);
    return DensityMatrix::unchecked(r);
}

std::array<double, 8> ihr_decoupled_closed_form(const SystemParams& params) {
    const auto t = transition_table(params);
    const auto& e = t.entries;
    const double ap15 = j_up(params, e[0]), am15 = j_down(params, e[0]);
    const double ap26 = j_up(params, e[1]), am26 = j_down(params, e[1]);
    const double bp = j_up(params, e[4]), bm = j_down(params, e[4]);
    const double cp12 = j_up(params, e[8]), cm12 = j_down(params, e[8]);
    const double cp56 = j_up(params, e[10]), cm56 = j_down(params, e[10]);

    const double s1 = ap26 * cp12 * (ap15 + cm56) + ap15 * cp56 * (am26 + cp12);
    const double s2 = ap26 * cm56 * (am15 + cm12) + ap15 * cm12 * (ap26 + cp56);
    const double s5 = am15 * cp12 * (ap26 + cp56) + am26 * cp56 * (am15 + cm12);
    const double s6 = am26 * cm12 * (ap15 + cm56) + am15 * cm56 * (am26 + cp12);
    return {bp * s1, bp * s2, bm * s1, bm * s2, bp * s5, bp * s6, bm * s5, bm * s6};
}

std::array<double, 8> ihr_tree_populations(const SystemParams& params) {
    const auto t = transition_table(params);
    kirchhoff::Graph g;
    g.nodes = 8;
    for (const auto& e : t.entries)
        g.edges.push_back({e.from, e.to, 2.0 * j_down(params, e), 2.0 * j_up(params, e)});
    const auto w = kirchhoff::stationary(g);
    std::array<double, 8> out{};
    std::copy(w.begin(), w.end(), out.begin());
    return out;
}

// ---------------------------------------------------------------- tilde basis

const Matrix8c& tilde_basis() {
    static const Matrix8c u = [] {
        const double s = 1.0 / std::sqrt(2.0);
        Matrix8c m = Matrix8c::Zero();
        m(4, 0) = s;  m(1, 0) = -s;   // ~1
        m(6, 1) = s;  m(3, 1) = -s;   // ~2
        m(0, 2) = 1.0;                // ~3
        m(2, 3) = 1.0;                // ~4
        m(1, 4) = s;  m(4, 4) = s;    // ~5
        m(3, 5) = s;  m(6, 5) = s;    // ~6
        m(5, 6) = 1.0;                // ~7
        m(7, 7) = 1.0;                // ~8
        return m;
    }();
    return u;
}

std::array<double, 8> tilde_populations(const DensityMatrix& rho) {
    const Matrix8c& u = tilde_basis();
    const Matrix8c t = u.adjoint() * rho.matrix() * u;
    std::array<double, 8> out{};
    for (int i = 0; i < 8; ++i) out[i] = t(i, i).real();
    return out;
}

DensityMatrix from_tilde_populations(const std::array<double, 8>& w) {
    const Matrix8c& u = tilde_basis();
    Eigen::Matrix<cd, 8, 1> d;
    for (int i = 0; i < 8; ++i) d(i) = w[i];
    return DensityMatrix::unchecked(u * d.asDiagonal() * u.adjoint());
}

double extract_fraction(const DensityMatrix& rho0) {
    const auto w = tilde_populations(rho0);
    double p = 0.0;
    for (int i = 2; i < 8; ++i) p += w[i];
    return p;
}

// ---------------------------------------------------------------- CHR

ChrNullStates chr_null_states(const SystemParams& params) {
    params.validate();
    const Matrix8d m = build_M_chr(params).m;
    ChrNullStates out;
    out.null = null_space(m);
    if (out.null.dimension != 2) {
        std::ostringstream os;
        os << "chr_null_states: expected a two-dimensional null space, found " << out.null.dimension;
        throw DegenerateNullSpace(os.str(), out.null.dimension);
    }
    const Eigen::Matrix<double, 8, 1> b1 = out.null.basis.col(0);
    const Eigen::Matrix<double, 8, 1> b2 = out.null.basis.col(1);
    // Kill the subspace-1 weight for rho2 and the subspace-2 weight for rho1.
    Eigen::Matrix<double, 8, 1> v2 = weight_subspace1(b2) * b1 - weight_subspace1(b1) * b2;
    Eigen::Matrix<double, 8, 1> v1 = weight_subspace2(b2) * b1 - weight_subspace2(b1) * b2;
    v2 /= weight_subspace2(v2);
    v1 /= weight_subspace1(v1);
    out.rho1 = chr_vector_to_density(v1);
    out.rho2 = chr_vector_to_density(v2);
    return out;
}

DensityMatrix rho1_closed_form(const SystemParams& params) {
    require_crossing(params, "rho1_closed_form");
    const auto t = transition_table(params);
    const double rp = j_up(params, t.entries[5]);
    const double rm = j_down(params, t.entries[5]);
    std::array<double, 8> w{};
    w[0] = rp / (rp + rm);
    w[1] = rm / (rp + rm);
    return from_tilde_populations(w);
}

std::array<double, 14> ladder_rates(const SystemParams& params) {
    const auto t = transition_table(params);
    // L35, L46, L57, L68, R34, R56, R78 -> table entries A15, A37, A26, A48, B13, B24, B68.
    static constexpr std::array<int, 7> kEntry{0, 2, 1, 3, 4, 5, 7};
    std::array<double, 14> r{};
    for (int k = 0; k < 7; ++k) {
        r[2 * k] = j_up(params, t.entries[kEntry[k]]);
        r[2 * k + 1] = j_down(params, t.entries[kEntry[k]]);
    }
    return r;
}

namespace {

// Printed polynomial numerators of rho~3..rho~8; each factor is a ladder
// rate with the sign of its argument.
constexpr const char* kRho2Terms[6][15] = {
    {"4 L35+ L46+ L57+ L68+ R34+", "4 L35+ L46- L57+ L68+ R56+", "4 L35+ L46- L57+ L68- R78+",
     "2 L35+ L46+ L57+ R34+ R78+", "2 L35+ L46- L57+ R56+ R78+", "2 L35+ L46+ L68+ R34+ R78-",
     "2 L35+ L46- L68+ R56+ R78-", "2 L35+ L57+ L68+ R34+ R56+", "2 L35+ L57+ L68- R34+ R78+",
     "2 L46+ L57+ L68+ R34+ R56-", "2 L46+ L57- L68+ R34+ R78-", "1 L35+ L57+ R34+ R56+ R78+",
     "1 L35+ L68+ R34+ R56+ R78-", "1 L46+ L57+ R34+ R56- R78+", "1 L46+ L68+ R34+ R56- R78-"},
    {"4 L35+ L46+ L57+ L68+ R34-", "4 L35- L46+ L57+ L68+ R56-", "4 L35- L46+ L57- L68+ R78-",
     "2 L35+ L46+ L57+ R34- R78+", "2 L35- L46+ L57+ R56- R78+", "2 L35+ L46+ L68+ R34- R78-",
     "2 L35- L46+ L68+ R56- R78-", "2 L35+ L57+ L68+ R34- R56+", "2 L35+ L57+ L68- R34- R78+",
     "2 L46+ L57+ L68+ R34- R56-", "2 L46+ L57- L68+ R34- R78-", "1 L35+ L57+ R34- R56+ R78+",
     "1 L35+ L68+ R34- R56+ R78-", "1 L46+ L57+ R34- R56- R78+", "1 L46+ L68+ R34- R56- R78-"},
    {"4 L35- L46+ L57+ L68+ R34+", "4 L35- L46- L57+ L68+ R56+", "4 L35- L46- L57+ L68- R78+",
     "2 L35- L46+ L68+ R34+ R78-", "2 L35- L46- L68+ R56+ R78-", "2 L35- L46+ L57+ R34+ R78+",
     "2 L35- L46- L57+ R56+ R78+", "2 L35- L57+ L68+ R34+ R56+", "2 L35- L57+ L68- R34+ R78+",
     "2 L46- L57+ L68+ R34- R56+", "2 L46- L57+ L68- R34- R78+", "1 L35- L57+ R34+ R56+ R78+",
     "1 L35- L68+ R34+ R56+ R78-", "1 L46- L57+ R34- R56+ R78+", "1 L46- L68+ R34- R56+ R78-"},
    {"4 L35+ L46- L57+ L68+ R34-", "4 L35- L46- L57+ L68+ R56-", "4 L35- L46- L57- L68+ R78-",
     "2 L35+ L46- L57+ R34- R78+", "2 L35- L46- L57+ R56- R78+", "2 L35+ L46- L68+ R34- R78-",
     "2 L35- L46- L68+ R56- R78-", "2 L35- L57+ L68+ R34+ R56-", "2 L35- L57- L68+ R34+ R78-",
     "2 L46- L57+ L68+ R34- R56-", "2 L46- L57- L68+ R34- R78-", "1 L35- L57+ R34+ R56- R78+",
     "1 L35- L68+ R34+ R56- R78-", "1 L46- L57+ R34- R56- R78+", "1 L46- L68+ R34- R56- R78-"},
    {"4 L35- L46+ L57- L68+ R34+", "4 L35- L46- L57- L68+ R56+", "4 L35- L46- L57- L68- R78+",
     "2 L35- L46+ L57- R34+ R78+", "2 L35- L46- L57- R56+ R78+", "2 L35+ L46- L68- R34- R78+",
     "2 L35- L46- L68- R56- R78+", "2 L35- L57- L68+ R34+ R56+", "2 L35- L57- L68- R34+ R78+",
     "2 L46- L57- L68+ R34- R56+", "2 L46- L57- L68- R34- R78+", "1 L35- L57- R34+ R56+ R78+",
     "1 L35- L68- R34+ R56- R78+", "1 L46- L57- R34- R56+ R78+", "1 L46- L68- R34- R56- R78+"},
    {"4 L35+ L46- L57+ L68- R34-", "4 L35- L46- L57+ L68- R56-", "4 L35- L46- L57- L68- R78-",
     "2 L35- L46+ L57- R34+ R78-", "2 L35- L46- L57- R56+ R78-", "2 L35+ L46- L68- R34- R78-",
     "2 L35- L46- L68- R56- R78-", "2 L35- L57+ L68- R34+ R56-", "2 L35- L57- L68- R34+ R78-",
     "2 L46- L57+ L68- R34- R56-", "2 L46- L57- L68- R34- R78-", "1 L35- L57- R34+ R56+ R78-",
     "1 L35- L68- R34+ R56- R78-", "1 L46- L57- R34- R56+ R78-", "1 L46- L68- R34- R56- R78-"},
};

int ladder_index(const std::string& name) {
    static const char* kNames[7] = {"L35", "L46", "L57", "L68", "R34", "R56", "R78"};
    for (int k = 0; k < 7; ++k)
        if (name == kNames[k]) return k;
    throw std::logic_error("unknown ladder rate " + name);
}

double evaluate_term(const char* term, const std::array<double, 14>& r) {
    std::istringstream is(term);
    double value = 0.0;
    is >> value;
    std::string factor;
    while (is >> factor) {
        const int k = ladder_index(factor.substr(0, 3));
        value *= r[2 * k + (factor[3] == '+' ? 0 : 1)];
    }
    return value;
}

} // namespace

std::array<double, 6> rho2_closed_form_weights(const SystemParams& params) {
    require_crossing(params, "rho2_closed_form");
    const auto r = ladder_rates(params);
    std::array<double, 6> w{};
    for (int i = 0; i < 6; ++i)
        for (const char* term : kRho2Terms[i]) w[i] += evaluate_term(term, r);
    return w;
}

std::array<double, 6> rho2_decoupled_weights(const SystemParams& params) {
    require_crossing(params, "rho2_decoupled_weights");
    const auto r = ladder_rates(params);
    auto plus = [&](LadderRate k) { return r[2 * static_cast<int>(k)]; };
    auto minus = [&](LadderRate k) { return r[2 * static_cast<int>(k) + 1]; };
    using enum LadderRate;
    return {plus(L35) * plus(L57) * plus(R34),  plus(L35) * plus(L57) * minus(R34),
            minus(L35) * plus(L57) * plus(R34), minus(L35) * plus(L57) * minus(R34),
            minus(L35) * minus(L57) * plus(R34), minus(L35) * minus(L57) * minus(R34)};
}

DensityMatrix rho2_closed_form(const SystemParams& params) {
    const auto w = rho2_closed_form_weights(params);
    double total = 0.0;
    for (double x : w) total += x;
    std::array<double, 8> pops{};
    for (int i = 0; i < 6; ++i) pops[i + 2] = w[i] / total;
    return from_tilde_populations(pops);
}

kirchhoff::Graph rho2_ladder_graph(const SystemParams& params) {
    require_crossing(params, "rho2_ladder_graph");
    const auto r = ladder_rates(params);
    auto up = [&](LadderRate k) { return r[2 * static_cast<int>(k)]; };
    auto down = [&](LadderRate k) { return r[2 * static_cast<int>(k) + 1]; };
    using enum LadderRate;
    // Nodes ~3..~8 -> 0..5; the first endpoint of each edge is the upper level.
    kirchhoff::Graph g;
    g.nodes = 6;
    g.edges = {
        {0, 2, 4 * down(L35), 4 * up(L35)},
        {2, 4, 4 * down(L57), 4 * up(L57)},
        {1, 3, 4 * down(L46), 4 * up(L46)},
        {3, 5, 4 * down(L68), 4 * up(L68)},
        {0, 1, 2 * down(R34), 2 * up(R34)},
        {2, 3, 2 * down(R56), 2 * up(R56)},
        {4, 5, 2 * down(R78), 2 * up(R78)},
    };
    return g;
}

SteadyDecomposition steady_chr(const SystemParams& params, double p) {
    require_crossing(params, "steady_chr");
    params.validate();
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("steady_chr: p must lie in [0, 1]");
    SteadyDecomposition out;
    out.p = p;
    out.rho1 = rho1_closed_form(params);
    if (params.t_left == 0.0) {
        // No left absorption: everything drains onto the bottom rung ~7, ~8.
        const auto t = transition_table(params);
        const double rp = j_up(params, t.entries[7]);
        const double rm = j_down(params, t.entries[7]);
        std::array<double, 8> w{};
        w[6] = rp / (rp + rm);
        w[7] = rm / (rp + rm);
        out.rho2 = from_tilde_populations(w);
    } else {
        const Matrix8c& r = chr_null_states(params).rho2.matrix();
        Eigen::Matrix<double, 8, 1> v;
        v << r(0, 0).real(), r(1, 1).real(), r(2, 2).real(), r(3, 3).real(), r(5, 5).real(),
            r(7, 7).real(), r(1, 4).real(), r(3, 6).real();
        out.rho2 = chr_vector_to_density(refine_rho2(params, v));
    }
    out.rho = DensityMatrix::unchecked((1.0 - p) * out.rho1.matrix() + p * out.rho2.matrix());
    return out;
}

SteadyDecomposition steady_chr(const SystemParams& params, const DensityMatrix& rho0) {
    double p = extract_fraction(rho0);
    // Round-off can push an exact endpoint marginally outside [0, 1].
    if (p < 0.0 && p > -1e-12) p = 0.0;
    if (p > 1.0 && p < 1.0 + 1e-12) p = 1.0;
    return steady_chr(params, p);
}

DensityMatrix steady_state(const SystemParams& params, double p) {
    if (common_mode_active(params)) return steady_chr(params, p).rho;
    return steady_ihr(params);
}

} // namespace triq
