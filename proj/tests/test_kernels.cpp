#include "doctest.h"

#include "graphbior/error.hpp"
#include "graphbior/kernels.hpp"
#include "graphbior/metrics.hpp"

#include <cmath>
#include <string>

using namespace graphbior;

namespace {

// 2 (1 - x/2)^K sum_j C(K-1+j, j) (x/2)^j
long double closed_form(int K, long double x)
{
    long double y = x / 2, s = 0, c = 1;
    for (int j = 0; j < K; ++j) {
        s += c * std::pow(y, static_cast<long double>(j));
        c = c * (K + j) / (j + 1);
    }
    return 2 * std::pow(1 - y, static_cast<long double>(K)) * s;
}

} // namespace

TEST_CASE("half-band K=1 and K=2")
{
    auto h1 = design_halfband(1);
    CHECK(h1.p.coeffs() == std::vector<double>{2.0, -1.0});

    auto h2 = design_halfband(2);
    REQUIRE(h2.p.degree() == 3);
    const std::vector<double> want{2.0, 0.0, -1.5, 0.5};
    for (int j = 0; j < 4; ++j)
        CHECK(h2.p[j] == doctest::Approx(want[static_cast<size_t>(j)]).epsilon(1e-14).scale(1.0));
    auto r = residual_roots(h2);
    REQUIRE(r.size() == 1);
    CHECK(r[0].real() == doctest::Approx(-1.0));
}

TEST_CASE("half-band matches the closed form")
{
    for (int K = 1; K <= 16; ++K) {
        auto hb = design_halfband(K);
        INFO("K=" << K);
        CHECK(hb.p.degree() == 2 * K - 1);
        CHECK(hb.residual.degree() == K - 1);
        CHECK(hb.residual[0] == doctest::Approx(1.0));
        double worst = 0;
        for (int i = 0; i <= 200; ++i) {
            const long double l = -1.0L + i / 100.0L;
            worst = std::max(worst, static_cast<double>(std::fabs(
                                        eval_ld(hb.centered, l) - closed_form(K, 1 + l))));
        }
        CHECK(worst <= 1e-9);
        if (K <= 8) {
            for (int i = 0; i <= 20; ++i) {
                const double x = i / 10.0;
                CHECK(std::fabs(eval(hb.p, x) - static_cast<double>(closed_form(K, x))) <= 1e-9);
            }
        }
    }
}

TEST_CASE("half-band structural properties")
{
    for (int K = 1; K <= kMaxDesignK; ++K) {
        auto hb = design_halfband(K);
        INFO("K=" << K);
        CHECK(std::fabs(hb.p[0] - 2.0) <= 1e-9);
        CHECK(std::fabs(eval_ld(hb.centered, 1.0L)) <= 1e-9);
        // 1 + odd powers in l
        CHECK(hb.centered[0] == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 2; j <= hb.centered.degree(); j += 2)
            CHECK(std::fabs(hb.centered[j]) <= 1e-9 * hb.centered.max_abs_coeff());
        CHECK(residual_roots(hb).size() == static_cast<size_t>(K - 1));
    }
    CHECK_THROWS_AS(design_halfband(0), ValidationError);
    CHECK_THROWS_AS(design_halfband(kMaxDesignK + 1), ValidationError);
}

TEST_CASE("design is deterministic")
{
    for (auto [a, b] : {std::pair{3, 3}, std::pair{6, 6}, std::pair{9, 9}}) {
        auto x = design_kernels(a, b), y = design_kernels(a, b);
        CHECK(x.h0 == y.h0);
        CHECK(x.h1 == y.h1);
        CHECK(x.g0 == y.g0);
        CHECK(x.g1 == y.g1);
        CHECK(kernel_hash(x) == kernel_hash(y));
    }
}

TEST_CASE("graphBior(1,1) structure")
{
    auto ks = design_kernels(1, 1);
    REQUIRE(ks.h0.degree() == 2);
    REQUIRE(ks.g0.degree() == 1);
    REQUIRE(ks.h1.degree() == 1);
    // h0 ~ (2 - x)(1 + x), g0 ~ (2 - x), h1 ~ x
    CHECK(std::fabs(eval(ks.h0, 2.0)) <= 1e-12);
    CHECK(std::fabs(eval(ks.h0, -1.0)) <= 1e-12);
    CHECK(std::fabs(eval(ks.g0, 2.0)) <= 1e-12);
    CHECK(ks.h1[0] == 0.0);
    CHECK(std::fabs(eval(ks.g1, 0.0)) <= 1e-12);
    CHECK(std::fabs(eval(ks.g1, 2.0)) > 0.1);
}

TEST_CASE("graphBior(8,8) highpass has eight zeros at 0")
{
    auto ks = design_kernels(8, 8);
    CHECK(ks.h1.degree() == 15);
    for (int j = 0; j < 8; ++j)
        CHECK(ks.h1[j] == 0.0);
    CHECK(ks.h1[8] != 0.0);
    CHECK(filter_length(ks) == 16);
}

TEST_CASE("designed sets satisfy the reconstruction conditions")
{
    const std::pair<int, int> designs[] = {{1, 1}, {2, 2}, {1, 3}, {3, 4}, {4, 4}, {5, 5},
                                           {6, 6}, {7, 7}, {5, 8}, {8, 8}, {9, 9}, {10, 10}};
    for (auto [k0, k1] : designs) {
        INFO("graphBior(" << k0 << "," << k1 << ")");
        auto ks = design_kernels(k0, k1);
        auto rep = verify_kernelset(ks);
        CHECK(rep.max_pr_deviation <= 1e-8);
        CHECK(rep.max_alias_deviation <= 1e-8);
        CHECK(rep.max_halfband_deviation <= 1e-8);
        CHECK(rep.mirror_h1_deviation <= 1e-10);
        CHECK(rep.mirror_g1_deviation <= 1e-10);
        CHECK(ks.h0.degree() == k0 + k1);
        CHECK(ks.g0.degree() == k0 + k1 - 1);
        for (int j = 0; j < k1; ++j)
            CHECK(ks.h1[j] == 0.0);
        CHECK(ks.gain_low == doctest::Approx(1.0 / std::fabs(eval(ks.h0, 0.0))));
        CHECK(ks.gain_high == doctest::Approx(1.0 / std::fabs(eval_ld(ks.h1c, 1.0L))));
        // product of the lowpass pair is the half-band kernel
        auto hb = design_halfband(k0 + k1);
        CHECK(relative_coeff_distance(mul(ks.h0c, ks.g0c), hb.centered) <= 1e-8);
        if (k0 + k1 <= 12)
            CHECK(relative_coeff_distance(mul(ks.h0, ks.g0), hb.p) <= 1e-8);
    }
}

TEST_CASE("chosen split maximizes theta")
{
    for (auto [k0, k1] : {std::pair{2, 2}, std::pair{3, 4}, std::pair{5, 5}, std::pair{6, 6}}) {
        INFO("graphBior(" << k0 << "," << k1 << ")");
        auto hb = design_halfband(k0 + k1);
        auto splits = enumerate_splits(hb, k0, k1);
        REQUIRE(!splits.empty());
        auto ks = factorize(hb, k0, k1);
        for (const auto& sp : splits)
            CHECK(sp.theta <= ks.theta + 1e-12);
        // local maximum in the split scale
        for (double t : {0.98, 0.995, 1.005, 1.02}) {
            auto th = theta_of(scale(ks.h0, t), scale(ks.h1, 1.0 / t), theta_grid());
            CHECK(th.theta <= ks.theta + 1e-9);
        }
    }
}

TEST_CASE("theta of moderate designs")
{
    for (int k = 4; k <= 8; ++k) {
        INFO("k=" << k);
        auto ks = design_kernels(k, k);
        CHECK(ks.theta >= 0.8);
        CHECK(ks.theta <= 1.0);
    }
}

TEST_CASE("parity-infeasible factorization is rejected")
{
    // K = 3: both residual roots are a conjugate pair, so h0 cannot take one
    auto nf = nearest_feasible(2, 1);
    CHECK(nf.first + nf.second == 3);
    try {
        design_kernels(2, 1);
        FAIL("expected an exception");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("parity-infeasible") != std::string::npos);
        CHECK(msg.find("nearest feasible: (" + std::to_string(nf.first) + "," +
                       std::to_string(nf.second) + ")") != std::string::npos);
    }
    CHECK_THROWS_AS(design_kernels(0, 2), ValidationError);
}

TEST_CASE("verify flags broken mirror relations")
{
    KernelSet unit;
    unit.h0 = unit.h1 = unit.g0 = unit.g1 = Polynomial({1.0});
    auto rep = verify_kernelset(unit);
    CHECK(rep.max_halfband_deviation <= 1e-15);
    CHECK(rep.max_pr_deviation <= 1e-15);
    CHECK(rep.perfect_reconstruction());

    auto ks = design_kernels(2, 2);
    ks.g1 = Polynomial({0.0, 1.0});
    ks.g1c = Polynomial();
    auto bad = verify_kernelset(ks);
    CHECK(bad.max_alias_deviation > 1e-3);
    CHECK(bad.mirror_g1_deviation > 1e-3);
    CHECK_FALSE(bad.perfect_reconstruction());
}

TEST_CASE("kernel csv round trip")
{
    auto ks = design_kernels(3, 4);
    auto back = parse_kernels_csv(kernels_to_csv(ks));
    CHECK(back.k0 == 3);
    CHECK(back.k1 == 4);
    CHECK(relative_coeff_distance(back.h0, ks.h0) <= 1e-15);
    CHECK(relative_coeff_distance(back.g1, ks.g1) <= 1e-15);
    CHECK(back.gain_low == doctest::Approx(ks.gain_low));
    CHECK(back.theta == doctest::Approx(ks.theta).epsilon(1e-9));
    for (auto [a, b] : {std::pair{6, 6}, std::pair{10, 10}}) {
        auto rep = verify_kernelset(parse_kernels_csv(kernels_to_csv(design_kernels(a, b))));
        INFO("graphBior(" << a << "," << b << ")");
        CHECK(rep.mirror_h1_deviation <= 1e-10);
        CHECK(rep.mirror_g1_deviation <= 1e-10);
        if (a + b <= 16)
            CHECK(rep.perfect_reconstruction());
    }
    CHECK_THROWS_WITH_AS(parse_kernels_csv("1,2\n3,4\n", "k.csv"),
                         doctest::Contains("k.csv"), ValidationError);
}

TEST_CASE("published table rows are reproduced up to their rounding")
{
    for (const auto& row : table2()) {
        INFO("graphBior(" << row.k0 << "," << row.k1 << ")");
        auto ks = design_kernels(row.k0, row.k1);
        auto cmp = compare_table2(row, ks);
        CHECK(cmp.h0_coeff_distance <= 1e-4);
        CHECK(cmp.h1_coeff_distance <= 1e-4);
        CHECK(cmp.rounded_root_distance <= 1e-9);
        CHECK(cmp.product_distance <= 1e-2);
        CHECK(cmp.product_zero_distance <= 1e-2);
        CHECK(row.h1_desc.size() == static_cast<size_t>(row.k0 + row.k1));
        CHECK(row.h0_desc.size() == static_cast<size_t>(row.k0 + row.k1 + 1));
    }
    CHECK(find_table2(6, 6) != nullptr);
    CHECK(find_table2(3, 3) == nullptr);
}

TEST_CASE("published graphBior(6,6) theta")
{
    const auto* row = find_table2(6, 6);
    REQUIRE(row != nullptr);
    auto th = theta_of(from_descending(row->h0_desc), from_descending(row->h1_desc), theta_grid());
    auto ks = design_kernels(6, 6);
    CHECK(th.theta >= 0.75);
    CHECK(th.theta <= 1.0);
    CHECK(ks.theta >= th.theta - 0.05);
}

TEST_CASE("theta grid")
{
    const auto& g = theta_grid();
    REQUIRE(g.size() == 100);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
}
