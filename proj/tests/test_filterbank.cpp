#include "doctest.h"

#include "graphbior/error.hpp"
#include "graphbior/experiments.hpp"
#include "graphbior/filterbank.hpp"
#include "graphbior/metrics.hpp"

#include <cmath>

using namespace graphbior;

namespace {

Signal random_signal(int n, std::uint64_t seed)
{
    Rng rng(seed, 78);
    Signal f(n);
    for (int i = 0; i < n; ++i)
        f[i] = rng.normal();
    return f;
}

FilterbankConfig config(int k0, int k1, Variant v, bool gc = true, int levels = 1)
{
    FilterbankConfig cfg;
    cfg.kernels = design_kernels(k0, k1);
    cfg.variant = v;
    cfg.gain_compensation = gc;
    cfg.levels = levels;
    return cfg;
}

double rel_error(const Signal& a, const Signal& b) { return (a - b).norm() / b.norm(); }

Signal round_trip(const Graph& g, const BipartiteDecomposition& d, const FilterbankConfig& cfg,
                  const Signal& f)
{
    return synthesize(g, d, cfg, analyze(g, d, cfg, f));
}

// coefficients in node order, gc off
Signal analysis_vector(const Graph& g, const BipartitePartition& p, const KernelSet& ks,
                       const Signal& f, Variant v)
{
    auto two = analyze_one(g, p, ks, f, v, false);
    return two.low + two.high;
}

KernelSet unit_kernels()
{
    KernelSet ks;
    ks.h0 = ks.h1 = ks.g0 = ks.g1 = Polynomial({1.0});
    ks.k0 = ks.k1 = 0;
    return ks;
}

} // namespace

TEST_CASE("zero signal")
{
    auto rb = random_bipartite(20, 1);
    auto two = analyze_one(rb.graph, rb.partition, design_kernels(3, 3), Signal::Zero(rb.graph.n()),
                           Variant::nonzero_dc, true);
    CHECK(two.low.isZero());
    CHECK(two.high.isZero());
}

TEST_CASE("DC goes to the low channel")
{
    auto rb = random_bipartite(40, 2);
    const Graph& g = rb.graph;
    auto ks = design_kernels(4, 4);
    Signal ones = Signal::Ones(g.n());
    auto z = analyze_one(g, rb.partition, ks, ones, Variant::zero_dc, true);
    CHECK(z.high.cwiseAbs().maxCoeff() <= 1e-9);

    Signal dsq(g.n());
    for (int i = 0; i < g.n(); ++i)
        dsq[i] = std::sqrt(g.degree()[static_cast<size_t>(i)]);
    auto nz = analyze_one(g, rb.partition, ks, dsq, Variant::nonzero_dc, true);
    CHECK(nz.high.cwiseAbs().maxCoeff() <= 1e-9);
    // but the nonzeroDC highpass does respond to a constant on an irregular graph
    auto nz1 = analyze_one(g, rb.partition, ks, ones, Variant::nonzero_dc, true);
    CHECK(nz1.high.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("K2 round trip")
{
    Graph k2(2, {{0, 1, 1.0}});
    auto d = auto_decompose(k2);
    Signal f(2);
    f << 3.0, -1.25;
    for (Variant v : {Variant::nonzero_dc, Variant::zero_dc})
        CHECK(rel_error(round_trip(k2, d, config(1, 1, v), f), f) <= 1e-12);
}

TEST_CASE("random bipartite round trip with graphBior(6,6)")
{
    auto rb = random_bipartite(60, 120);
    auto d = single_stage(rb.graph, rb.partition);
    Signal f = random_signal(rb.graph.n(), 5);
    for (Variant v : {Variant::nonzero_dc, Variant::zero_dc})
        CHECK(snr(f, round_trip(rb.graph, d, config(6, 6, v), f)) >= 100.0);
}

TEST_CASE("perfect reconstruction across designs, variants and sizes")
{
    const std::pair<int, int> designs[] = {{1, 1}, {2, 2}, {1, 3}, {3, 4}, {5, 5}, {6, 6}, {7, 7}, {8, 8}};
    Rng rng(99);
    int run = 0;
    for (auto [k0, k1] : designs)
        for (Variant v : {Variant::nonzero_dc, Variant::zero_dc})
            for (bool gc : {true, false}) {
                const int side = 10 + rng.below(140);
                auto rb = random_bipartite(side, 1000 + static_cast<std::uint64_t>(run++));
                auto d = single_stage(rb.graph, rb.partition);
                Signal f = random_signal(rb.graph.n(), static_cast<std::uint64_t>(run));
                INFO("graphBior(" << k0 << "," << k1 << ") " << variant_name(v) << " gc=" << gc
                                  << " n=" << rb.graph.n());
                CHECK(rel_error(round_trip(rb.graph, d, config(k0, k1, v, gc), f), f) <= 1e-7);
            }
}

TEST_CASE("multi-stage, multi-level round trip on a planar graph")
{
    auto pg = synthetic_planar(400, 17);
    auto d = harary_decompose(pg.graph, pg.colors);
    REQUIRE(d.stages.size() == 2);
    Signal f = random_signal(pg.graph.n(), 6);
    auto cfg = config(7, 7, Variant::zero_dc, true, 2);
    auto tree = analyze(pg.graph, d, cfg, f);
    CHECK(tree.coefficient_count() == static_cast<size_t>(pg.graph.n()));
    CHECK(snr(f, synthesize(pg.graph, d, cfg, tree)) >= 100.0);
}

TEST_CASE("a 3-colored graph leaves one cell empty")
{
    auto pg = synthetic_planar(100, 4);
    auto d = harary_decompose(pg.graph, pg.colors);
    auto cfg = config(2, 2, Variant::nonzero_dc);
    auto tree = analyze(pg.graph, d, cfg, piecewise_constant_signal(pg));
    REQUIRE(tree.levels[0].channels.size() == 4);
    int empty = 0;
    for (const auto& ch : tree.levels[0].channels)
        if (ch.nodes.empty()) {
            ++empty;
            CHECK(ch.bits == "HH");
        }
    CHECK(empty == 1);
    CHECK(tree.coefficient_count() == 100);
}

TEST_CASE("critical sampling on a 128x128 image, 4 levels")
{
    auto ig = image_graph({128, 128, 8, std::nullopt});
    auto cfg = config(2, 2, Variant::zero_dc, true, 4);
    cfg.coarsening = {CoarsenScheme::lattice8, ig.shape};
    Image img = disk_scene(128);
    Signal f = Eigen::Map<const Signal>(img.pixels.data(), static_cast<Eigen::Index>(img.pixels.size()));
    auto tree = analyze(ig.graph, ig.decomposition, cfg, f);
    CHECK(tree.levels.size() == 4);
    CHECK(tree.coefficient_count() == 16384);
    CHECK(snr(f, synthesize(ig.graph, ig.decomposition, cfg, tree)) >= 100.0);
}

TEST_CASE("zeroed detail channels leave errors near region boundaries")
{
    auto pg = synthetic_planar(900, 8);
    auto d = harary_decompose(pg.graph, pg.colors);
    Signal f = piecewise_constant_signal(pg);
    auto cfg = config(2, 2, Variant::zero_dc);
    auto tree = sparsify(analyze(pg.graph, d, cfg, f), 0.0);
    Signal e = (synthesize(pg.graph, d, cfg, tree) - f).cwiseAbs();

    const int n = pg.graph.n();
    std::vector<int> hop(static_cast<size_t>(n), -1);
    std::vector<int> frontier;
    for (const auto& ed : pg.graph.edges())
        if (f[ed.u] != f[ed.v])
            for (int v : {ed.u, ed.v})
                if (hop[static_cast<size_t>(v)] < 0) {
                    hop[static_cast<size_t>(v)] = 0;
                    frontier.push_back(v);
                }
    for (int dist = 1; !frontier.empty(); ++dist) {
        std::vector<int> next;
        for (int u : frontier)
            for (SparseRow::InnerIterator it(pg.graph.adjacency(), u); it; ++it) {
                const auto v = static_cast<size_t>(it.col());
                if (hop[v] < 0) {
                    hop[v] = dist;
                    next.push_back(static_cast<int>(v));
                }
            }
        frontier = std::move(next);
    }
    double near = 0, far = 0;
    int n_near = 0, n_far = 0;
    for (int v = 0; v < n; ++v) {
        if (hop[static_cast<size_t>(v)] <= 2) {
            near += e[v];
            ++n_near;
        } else {
            far += e[v];
            ++n_far;
        }
    }
    REQUIRE(n_near > 0);
    REQUIRE(n_far > 0);
    CHECK(near / n_near > 10.0 * (far / n_far));
}

TEST_CASE("identity kernels store the signal itself")
{
    auto rb = random_bipartite(15, 3);
    auto d = single_stage(rb.graph, rb.partition);
    FilterbankConfig cfg;
    cfg.kernels = unit_kernels();
    Signal f = random_signal(rb.graph.n(), 9);
    auto tree = analyze(rb.graph, d, cfg, f);
    for (const auto& ch : tree.levels[0].channels)
        for (size_t k = 0; k < ch.nodes.size(); ++k)
            CHECK(ch.values[k] == f[ch.nodes[k]]);
    CHECK((synthesize(rb.graph, d, cfg, tree) - f).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mismatched trees are rejected")
{
    auto rb = random_bipartite(20, 4);
    auto d = single_stage(rb.graph, rb.partition);
    Signal f = random_signal(rb.graph.n(), 1);
    auto cfg = config(3, 3, Variant::zero_dc);
    auto tree = analyze(rb.graph, d, cfg, f);
    auto other = config(3, 3, Variant::nonzero_dc);
    CHECK_THROWS_WITH_AS(synthesize(rb.graph, d, other, tree), "incompatible coefficient tree",
                         ValidationError);
    auto more = config(3, 3, Variant::zero_dc, true, 2);
    CHECK_THROWS_WITH_AS(synthesize(rb.graph, d, more, tree), "incompatible coefficient tree",
                         ValidationError);
}

TEST_CASE("config validation")
{
    auto cfg = config(2, 2, Variant::zero_dc);
    cfg.levels = 0;
    CHECK_THROWS_AS(validate_config(cfg), ValidationError);
    cfg.levels = 1;
    cfg.kernels.g1 = scale(cfg.kernels.g1, 1.01);
    cfg.kernels.g1c = Polynomial();
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("perfect reconstruction"),
                         ValidationError);
    CHECK(parse_variant("zerodc") == Variant::zero_dc);
    CHECK_THROWS_AS(parse_variant("dc"), ValidationError);
    auto rb = random_bipartite(10, 2);
    BipartitePartition bad = rb.partition;
    bad.side[static_cast<size_t>(rb.graph.edges()[0].u)] = bad.side[static_cast<size_t>(rb.graph.edges()[0].v)];
    CHECK_THROWS_WITH_AS(analyze_one(rb.graph, bad, design_kernels(1, 1), Signal::Zero(rb.graph.n()),
                                     Variant::zero_dc, true),
                         "edge within one side", ValidationError);
}

TEST_CASE("sparsify")
{
    auto rb = random_bipartite(30, 5);
    auto d = single_stage(rb.graph, rb.partition);
    Signal f = random_signal(rb.graph.n(), 2);
    auto cfg = config(2, 2, Variant::zero_dc);
    auto tree = analyze(rb.graph, d, cfg, f);
    auto same = sparsify(tree, 1.0);
    for (size_t c = 0; c < tree.levels[0].channels.size(); ++c)
        CHECK(same.levels[0].channels[c].values == tree.levels[0].channels[c].values);
    auto none = sparsify(tree, 0.0);
    CHECK(none.levels[0].channels[0].values == tree.levels[0].channels[0].values);
    for (size_t c = 1; c < none.levels[0].channels.size(); ++c)
        for (double v : none.levels[0].channels[c].values)
            CHECK(v == 0.0);
    auto half = sparsify(tree, 0.5);
    size_t nz = 0;
    for (size_t c = 1; c < half.levels[0].channels.size(); ++c)
        for (double v : half.levels[0].channels[c].values)
            nz += v != 0.0;
    CHECK(nz == static_cast<size_t>(std::llround(0.5 * static_cast<double>(detail_count(tree)))));
    CHECK_THROWS_AS(sparsify(tree, 1.5), ValidationError);
}

TEST_CASE("gain compensation does not change the reconstruction")
{
    auto rb = random_bipartite(50, 6);
    auto d = single_stage(rb.graph, rb.partition);
    Signal f = random_signal(rb.graph.n(), 3);
    for (Variant v : {Variant::nonzero_dc, Variant::zero_dc}) {
        Signal a = round_trip(rb.graph, d, config(5, 5, v, true), f);
        Signal b = round_trip(rb.graph, d, config(5, 5, v, false), f);
        CHECK((a - b).norm() <= 1e-10 * f.norm());
    }
}

TEST_CASE("variants agree on regular graphs")
{
    Graph c8 = cycle_graph(8);
    auto d = auto_decompose(c8);
    Signal f = random_signal(8, 7);
    auto tz = analyze(c8, d, config(3, 3, Variant::zero_dc), f);
    auto tn = analyze(c8, d, config(3, 3, Variant::nonzero_dc), f);
    for (size_t c = 0; c < tz.levels[0].channels.size(); ++c)
        for (size_t k = 0; k < tz.levels[0].channels[c].values.size(); ++k)
            CHECK(std::fabs(tz.levels[0].channels[c].values[k] - tn.levels[0].channels[c].values[k]) <=
                  1e-9);
}

TEST_CASE("zeroDC is the degree conjugate of nonzeroDC")
{
    auto rb = random_bipartite(40, 7);
    auto d = single_stage(rb.graph, rb.partition);
    const Graph& g = rb.graph;
    Eigen::VectorXd ds(g.n());
    for (int i = 0; i < g.n(); ++i)
        ds[i] = std::sqrt(g.degree()[static_cast<size_t>(i)]);
    Signal f = random_signal(g.n(), 4);
    auto ks = design_kernels(4, 4);
    auto z = analyze_one(g, rb.partition, ks, f, Variant::zero_dc, false);
    auto n = analyze_one(g, rb.partition, ks, ds.cwiseProduct(f), Variant::nonzero_dc, false);
    CHECK((ds.cwiseProduct(z.low) - n.low).norm() <= 1e-10 * n.low.norm());
    CHECK((ds.cwiseProduct(z.high) - n.high).norm() <= 1e-10 * n.high.norm());
}

TEST_CASE("alias and equivalent operators add up to the composed transform")
{
    auto rb = random_bipartite(25, 8);
    const Graph& g = rb.graph;
    for (auto [k0, k1] : {std::pair{2, 2}, std::pair{6, 6}}) {
        auto ks = design_kernels(k0, k1);
        auto T = transfer_operators(g, rb.partition, ks, Basis::symmetric);
        Eigen::MatrixXd composed(g.n(), g.n());
        for (int j = 0; j < g.n(); ++j) {
            Signal e = Signal::Unit(g.n(), j);
            auto two = analyze_one(g, rb.partition, ks, e, Variant::nonzero_dc, false);
            composed.col(j) = synthesize_one(g, rb.partition, ks, two.low, two.high,
                                             Variant::nonzero_dc, false);
        }
        Eigen::MatrixXd sum = T.T_eq + T.T_alias;
        CHECK((sum - composed).cwiseAbs().maxCoeff() <= 1e-8);
        // perfect reconstruction: T_eq = I, T_alias = 0
        CHECK((T.T_eq - Eigen::MatrixXd::Identity(g.n(), g.n())).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(T.T_alias.cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("analysis energy stays within the Riesz bounds")
{
    auto rb = random_bipartite(40, 9);
    const Graph& g = rb.graph;
    auto ks = design_kernels(5, 5);
    auto rn = riesz_exact(g, rb.partition, ks, Variant::nonzero_dc);
    auto rz = riesz_exact(g, rb.partition, ks, Variant::zero_dc);
    REQUIRE(rz.has_prediction);
    for (int t = 0; t < 50; ++t) {
        Signal f = random_signal(g.n(), 300 + static_cast<std::uint64_t>(t)).normalized();
        const double a = analysis_vector(g, rb.partition, ks, f, Variant::nonzero_dc).norm();
        CHECK(a >= rn.A * (1 - 1e-6));
        CHECK(a <= rn.B * (1 + 1e-6));
        const double z = analysis_vector(g, rb.partition, ks, f, Variant::zero_dc).norm();
        CHECK(z >= rz.predicted_lo * (1 - 1e-6));
        CHECK(z <= rz.predicted_hi * (1 + 1e-6));
    }
    CHECK(rz.A >= rz.predicted_lo * (1 - 1e-9));
    CHECK(rz.B <= rz.predicted_hi * (1 + 1e-9));
}

TEST_CASE("coefficient dump")
{
    auto rb = random_bipartite(10, 10);
    auto d = single_stage(rb.graph, rb.partition);
    auto cfg = config(2, 2, Variant::zero_dc, false);
    auto tree = analyze(rb.graph, d, cfg, random_signal(rb.graph.n(), 5));
    auto s = coefficient_dump(tree);
    CHECK(s.find("# graph_hash=") == 0);
    CHECK(s.find("k0=2 k1=2") != std::string::npos);
    CHECK(s.find("variant=zerodc gc=0 levels=1") != std::string::npos);
    CHECK(s.find("level,channel_bits,node,value\n") != std::string::npos);
    CHECK(static_cast<size_t>(std::count(s.begin(), s.end(), '\n')) == 5 + static_cast<size_t>(rb.graph.n()));
}
