#include "doctest.h"

#include "graphbior/bipartite.hpp"
#include "graphbior/error.hpp"
#include "graphbior/experiments.hpp"

#include <set>

using namespace graphbior;

namespace {

bool proper(const Graph& g, const std::vector<int>& c)
{
    for (const auto& e : g.edges())
        if (c[static_cast<size_t>(e.u)] == c[static_cast<size_t>(e.v)])
            return false;
    return true;
}

size_t stage_edge_total(const BipartiteDecomposition& d)
{
    size_t n = 0;
    for (const auto& s : d.stages)
        n += s.graph.num_edges();
    return n;
}

} // namespace

TEST_CASE("is_bipartite")
{
    auto k2 = is_bipartite(Graph(2, {{0, 1, 1.0}}));
    REQUIRE(k2);
    CHECK(k2->side[0] != k2->side[1]);
    CHECK_FALSE(is_bipartite(complete_graph(3)));
    auto c4 = is_bipartite(cycle_graph(4));
    REQUIRE(c4);
    CHECK(c4->side[0] == c4->side[2]);
    CHECK(c4->side[1] == c4->side[3]);
    CHECK(c4->side[0] != c4->side[1]);
    CHECK(partition_valid(cycle_graph(4), *c4));
}

TEST_CASE("partition string round trip")
{
    auto p = BipartitePartition::from_string("LHHL");
    CHECK(p.to_string() == "LHHL");
    CHECK(p.beta() == BetaFunction{1, -1, -1, 1});
    CHECK_THROWS_AS(BipartitePartition::from_string("LXH"), ValidationError);
}

TEST_CASE("greedy coloring")
{
    // random trees use two colors
    for (std::uint64_t s = 1; s <= 5; ++s) {
        Graph t = random_connected_graph(30, 0.0, s, false);
        auto c = greedy_coloring(t);
        CHECK(proper(t, c));
        CHECK(color_count(c) <= 2);
    }
    CHECK(color_count(greedy_coloring(complete_graph(3))) == 3);
    Graph g = random_connected_graph(60, 0.1, 7, false);
    CHECK(proper(g, greedy_coloring(g)));
    CHECK(proper(g, greedy_coloring(g, ColoringOrder::natural)));
}

TEST_CASE("harary decomposition of bipartite and 3-colored graphs")
{
    Graph c6 = cycle_graph(6);
    auto d = harary_decompose(c6, {0, 1, 0, 1, 0, 1});
    REQUIRE(d.stages.size() == 1);
    CHECK(d.stages[0].graph.num_edges() == 6);
    CHECK(d.dropped() == 0);

    auto pg = synthetic_planar(100, 3);
    auto d3 = harary_decompose(pg.graph, pg.colors);
    CHECK(d3.stages.size() == 2);
    CHECK(stage_edge_total(d3) == pg.graph.num_edges());
    validate_decomposition(pg.graph, d3);

    CHECK_THROWS_WITH_AS(harary_decompose(complete_graph(3), {0, 0, 1}),
                         doctest::Contains("monochromatic edge"), ValidationError);
}

TEST_CASE("harary covers every edge of small 4-colorable graphs")
{
    // all graphs on 6 nodes; those greedy-colored with at most 4 colors
    const int n = 6;
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            pairs.emplace_back(a, b);
    int checked = 0;
    bool ok = true;
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
        std::vector<Edge> e;
        for (size_t k = 0; k < pairs.size(); ++k)
            if (mask >> k & 1u)
                e.push_back({pairs[k].first, pairs[k].second, 1.0});
        Graph g(n, std::move(e));
        auto c = greedy_coloring(g);
        if (color_count(c) > 4)
            continue;
        auto d = harary_decompose(g, c);
        ++checked;
        const size_t want_stages = color_count(c) <= 2 ? 1 : 2;
        if (d.stages.size() != want_stages || d.dropped() != 0 ||
            stage_edge_total(d) != g.num_edges()) {
            ok = false;
            break;
        }
        for (const auto& st : d.stages)
            if (!partition_valid(st.graph, st.partition))
                ok = false;
        if (!ok)
            break;
    }
    CHECK(ok);
    CHECK(checked > 30000);
}

TEST_CASE("decomposition text round trip")
{
    auto pg = synthetic_planar(49, 5);
    auto d = harary_decompose(pg.graph, pg.colors);
    auto back = parse_decomposition(pg.graph, decomposition_to_string(d));
    REQUIRE(back.stages.size() == d.stages.size());
    for (size_t t = 0; t < d.stages.size(); ++t) {
        CHECK(back.stages[t].partition.to_string() == d.stages[t].partition.to_string());
        CHECK(back.stages[t].graph.hash() == d.stages[t].graph.hash());
    }
    CHECK(back.hash() == d.hash());
    CHECK_THROWS_WITH_AS(parse_decomposition(pg.graph, "nonsense", "d.txt"),
                         doctest::Contains("d.txt"), ValidationError);
}

TEST_CASE("image graphs")
{
    auto g2 = image_graph({2, 2, 8, std::nullopt});
    CHECK(g2.graph.num_edges() == 6);
    REQUIRE(g2.decomposition.stages.size() == 2);
    CHECK(g2.decomposition.stages[0].graph.num_edges() == 4);
    CHECK(g2.decomposition.stages[1].graph.num_edges() == 2);

    auto g3 = image_graph({3, 3, 8, std::nullopt});
    CHECK(g3.decomposition.stages[0].graph.num_edges() == 12);
    CHECK(g3.decomposition.stages[1].graph.num_edges() == 8);
    validate_decomposition(g3.graph, g3.decomposition);
    // checkerboard, then row parity
    CHECK(g3.decomposition.stages[0].partition.to_string() == "LHLHLHLHL");
    CHECK(g3.decomposition.stages[1].partition.to_string() == "LLLHHHLLL");

    CHECK_THROWS_AS(image_graph({1, 4, 8, std::nullopt}), ValidationError);
    CHECK_THROWS_AS(image_graph({4, 4, 4, std::nullopt}), ValidationError);
}

TEST_CASE("masked links across a column")
{
    const int W = 6, H = 5, c = 3;
    LatticeShape shape{W, H};
    LinkMask m;
    m.shape = shape;
    for (int r = 0; r < H; ++r)
        for (int dr = -1; dr <= 1; ++dr)
            if (r + dr >= 0 && r + dr < H)
                m.add(shape.index(r, c - 1), shape.index(r + dr, c));
    m.finalize();
    auto ig = image_graph({W, H, 8, m});
    for (const auto& e : ig.graph.edges()) {
        const int cu = e.u % W, cv = e.v % W;
        CHECK((cu < c) == (cv < c));
    }
    CHECK(ig.graph.num_edges() == image_graph({W, H, 8, std::nullopt}).graph.num_edges() - m.links.size());
    CHECK(m.contains(shape.index(0, c), shape.index(0, c - 1)));
}

TEST_CASE("two-hop coarsening")
{
    auto res = coarsen_two_hop(path_graph(5), {0, 2, 4});
    REQUIRE(res.graph.n() == 3);
    REQUIRE(res.graph.num_edges() == 2);
    CHECK(res.graph.edges()[0].u == 0);
    CHECK(res.graph.edges()[0].v == 1);
    CHECK(res.graph.edges()[1].u == 1);
    CHECK(res.graph.edges()[1].v == 2);
    CHECK(res.graph.edges()[0].w == doctest::Approx(0.5));
    CHECK(res.isolated.empty());

    Graph g = random_connected_graph(30, 0.1, 2, false);
    std::vector<int> all(30);
    for (int i = 0; i < 30; ++i)
        all[static_cast<size_t>(i)] = i;
    auto sup = coarsen_two_hop(g, all);
    CHECK(sup.graph.num_edges() >= g.num_edges());
    std::set<std::pair<int, int>> have;
    for (const auto& e : sup.graph.edges())
        have.insert({e.u, e.v});
    for (const auto& e : g.edges())
        CHECK(have.count({e.u, e.v}) == 1);

    auto iso = coarsen_two_hop(Graph(4, {{0, 1, 1.0}, {2, 3, 1.0}}), {0, 3});
    CHECK(iso.isolated.size() == 2);
    CHECK_THROWS_AS(coarsen_two_hop(g, {}), ValidationError);
}

TEST_CASE("lattice coarsening")
{
    auto ig = image_graph({4, 4, 8, std::nullopt});
    auto res = coarsen_lattice8(ig.graph, ig.shape);
    CHECK(res.shape == LatticeShape{2, 2});
    CHECK(res.graph.num_edges() == 6);
    CHECK(res.kept == std::vector<int>{0, 2, 8, 10});
    CHECK_THROWS_AS(coarsen(ig.graph, {0, 1}, CoarsenScheme::lattice8, &ig.shape), ValidationError);
    CHECK_THROWS_AS(coarsen(ig.graph, res.kept, CoarsenScheme::lattice8), ValidationError);
}

TEST_CASE("validate_decomposition rejects bad stages")
{
    Graph g = cycle_graph(4);
    auto d = single_stage(g, *is_bipartite(g));
    validate_decomposition(g, d);
    d.stages[0].partition.side[0] = d.stages[0].partition.side[1];
    CHECK_THROWS_AS(validate_decomposition(g, d), ValidationError);
    CHECK_THROWS_AS(single_stage(complete_graph(3), BipartitePartition::from_string("LLH")),
                    ValidationError);
}
