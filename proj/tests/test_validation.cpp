#include "test_main.hpp"

#include <cmath>
#include <random>

#include "triq/model.hpp"
#include "triq/validation.hpp"

using namespace triq;

TEST_CASE("random points respect their mode") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const SystemParams a = random_independent_point(rng);
        CHECK_FALSE(common_mode_active(a));
        CHECK_NOTHROW(a.validate());
        const SystemParams c = random_common_point(rng);
        CHECK(common_mode_active(c));
        CHECK(c.kappa >= 1e-4);
        CHECK(c.kappa <= 1e-2);
    }
}

TEST_CASE("random density matrices are valid states") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) CHECK(random_density_matrix(rng).is_valid());
}

TEST_CASE("oracle triangle on a few points") {
    OracleOptions opts;
    opts.points_per_mode = 3;
    const OracleReport r = oracle_triangle(opts);
    REQUIRE(r.samples.size() == 6);
    CHECK(r.passed());
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        const OracleSample& s = r.samples[i];
        CHECK(s.common == (i >= 3));
        CHECK(s.rk4_residual <= 1e-10);
        CHECK(s.analytic_vs_null <= 1e-8);
        CHECK(s.null_vs_rk4 <= 1e-8);
        CHECK(s.conservation <= 1e-12);
        CHECK(s.rho.is_valid());
        if (!s.common) CHECK(s.p == 1.0);
    }
    // Same seed, same samples.
    const OracleReport again = oracle_triangle(opts);
    CHECK(again.max_disagreement == r.max_disagreement);

    opts.tolerance = 0.0;
    CHECK_FALSE(oracle_triangle(opts).passed());
}
