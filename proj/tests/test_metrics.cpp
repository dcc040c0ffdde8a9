#include "doctest.h"

#include "graphbior/error.hpp"
#include "graphbior/experiments.hpp"
#include "graphbior/metrics.hpp"

#include <cmath>

using namespace graphbior;

TEST_CASE("spatial spread examples")
{
    Graph p3 = path_graph(3);
    Signal delta = Signal::Unit(3, 2);
    CHECK(spatial_spread(p3, delta) == 0.0);
    Signal ends(3);
    ends << 1.0, 0.0, 1.0;
    ends /= std::sqrt(2.0);
    CHECK(spatial_spread(p3, ends) == doctest::Approx(1.0));
    CHECK(spatial_spread(Graph(2, {{0, 1, 1.0}}), Signal::Ones(2)) == doctest::Approx(0.5));
    CHECK_THROWS_WITH_AS(spatial_spread(p3, Signal::Zero(3)), "undefined spread", ValidationError);
}

TEST_CASE("spatial spread of a transform")
{
    Graph p3 = path_graph(3);
    CHECK(spatial_spread_tx(p3, Eigen::MatrixXd::Identity(3, 3)) == 0.0);
    std::vector<double> per;
    const double s = spatial_spread_tx(p3, kernel_responses(p3, Polynomial({0.0, 1.0})), &per);
    REQUIRE(per.size() == 3);
    CHECK(per[0] == doctest::Approx(1.0 / 3.0));
    CHECK(per[1] == doctest::Approx(0.5));
    CHECK(per[2] == doctest::Approx(1.0 / 3.0));
    CHECK(s == doctest::Approx(7.0 / 18.0));
}

TEST_CASE("spatial spread is scale and sign invariant")
{
    Graph g = random_connected_graph(30, 0.1, 3, false);
    Rng rng(4);
    Signal f(30);
    for (int i = 0; i < 30; ++i)
        f[i] = rng.normal();
    const double s = spatial_spread(g, f);
    CHECK(spatial_spread(g, -f) == doctest::Approx(s));
    CHECK(spatial_spread(g, 3.5 * f) == doctest::Approx(s));
}

TEST_CASE("spectral spread examples")
{
    auto rb = random_bipartite(20, 3);
    auto sd = eig(rb.graph);
    const auto n = sd.eigenvalues.size();
    CHECK(spectral_spread(sd, Signal(sd.eigenvectors.col(3))) == doctest::Approx(0.0).scale(1.0));
    Signal two = (sd.eigenvectors.col(0) + sd.eigenvectors.col(n - 1)) / std::sqrt(2.0);
    CHECK(spectral_spread(sd, two) == doctest::Approx(1.0));
    CHECK_THROWS_WITH_AS(spectral_spread(sd, Signal::Zero(n)), "undefined spread", ValidationError);

    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        Signal f(n);
        for (Eigen::Index i = 0; i < n; ++i)
            f[i] = rng.normal();
        const double s = spectral_spread(sd, f);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0 + 1e-12);
    }
}

TEST_CASE("ideal half-band trades spatial for spectral spread")
{
    double ideal_spec = 0, ideal_spat = 0, bior_spec = 0, bior_spat = 0;
    auto ks = design_kernels(6, 6);
    for (std::uint64_t s = 0; s < 3; ++s) {
        auto rb = random_bipartite(50, 40 + s);
        auto sd = eig(rb.graph);
        auto dist = distance_matrix(rb.graph);
        Eigen::MatrixXd ri = ideal_halfband_responses(sd);
        Eigen::MatrixXd rh = kernel_responses(rb.graph, ks.h0);
        ideal_spec += spectral_spread_tx(sd, ri);
        ideal_spat += spatial_spread_tx(dist, ri);
        bior_spec += spectral_spread_tx(sd, rh);
        bior_spat += spatial_spread_tx(dist, rh);
    }
    CHECK(ideal_spec < bior_spec);
    CHECK(ideal_spat > bior_spat);
}

TEST_CASE("theta examples")
{
    const auto& grid = theta_grid();
    auto orth = theta_of(Polynomial({1.0}), Polynomial({1.0}), grid);
    CHECK(orth.A == doctest::Approx(1.0));
    CHECK(orth.B == doctest::Approx(1.0));
    CHECK(orth.theta == doctest::Approx(1.0));
    auto deg = theta_of(Polynomial({3.0}), Polynomial(), grid);
    CHECK(deg.A == doctest::Approx(3.0 / std::sqrt(2.0)));
    CHECK(deg.theta == doctest::Approx(1.0));
    CHECK(theta_from_bounds(1.0, 3.0).theta == doctest::Approx(0.5));
    CHECK_THROWS_AS(theta_of(Polynomial({1.0}), Polynomial({1.0}), {3.0}), ValidationError);
}

TEST_CASE("exact Riesz bounds")
{
    auto rb = random_bipartite(15, 2);
    KernelSet unit;
    unit.h0 = unit.h1 = unit.g0 = unit.g1 = Polynomial({1.0});
    auto r = riesz_exact(rb.graph, rb.partition, unit, Variant::nonzero_dc);
    CHECK(r.A == doctest::Approx(1.0));
    CHECK(r.B == doctest::Approx(1.0));

    // sampled theta tracks the exact one on random graphs
    auto ks = design_kernels(6, 6);
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto g = random_bipartite(40, 60 + s);
        auto rn = riesz_exact(g.graph, g.partition, ks, Variant::nonzero_dc);
        auto rz = riesz_exact(g.graph, g.partition, ks, Variant::zero_dc);
        CHECK(rn.theta >= ks.theta - 0.05);
        CHECK(rz.A >= rz.predicted_lo * (1 - 1e-9));
        CHECK(rz.B <= rz.predicted_hi * (1 + 1e-9));
        CHECK(rz.theta <= rn.theta + 1e-9);
    }
}

TEST_CASE("snr")
{
    Signal a(4);
    a << 1, -2, 3, 0.5;
    CHECK(snr(a, a) == kSnrCap);
    Signal e(4);
    e << 1, 1, -1, 2;
    e *= 1e-3 * a.norm() / e.norm();
    CHECK(snr(a, a + e) == doctest::Approx(60.0));
    CHECK_THROWS_WITH_AS(snr(Signal::Zero(4), a), "undefined SNR", ValidationError);
    CHECK_THROWS_WITH_AS(snr(a, Signal::Zero(3)), "mismatched lengths", ValidationError);
    CHECK(psnr({0, 0}, {0, 0}) == kSnrCap);
    CHECK(psnr({255, 0}, {254, 1}) == doctest::Approx(20 * std::log10(255.0)));
}

TEST_CASE("distance matrix")
{
    Graph g(4, {{0, 1, 2.0}, {1, 2, 0.5}});
    auto D = distance_matrix(g);
    CHECK(D(0, 2) == 2.5);
    CHECK(std::isinf(D(0, 3)));
    CHECK(D(2, 0) == 2.5);
}
