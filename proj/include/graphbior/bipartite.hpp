#pragma once

#include "graphbior/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graphbior {

enum class Side : std::uint8_t { L = 0, H = 1 };

struct BipartitePartition {
    std::vector<Side> side;

    BetaFunction beta() const;
    static BipartitePartition from_string(const std::string& s);
    std::string to_string() const;
};

// true when every edge of g joins L to H
bool partition_valid(const Graph& g, const BipartitePartition& part);

struct Stage {
    Graph graph; // spans the full vertex set
    BipartitePartition partition;
};

struct BipartiteDecomposition {
    std::vector<Stage> stages;
    std::vector<int> coverage; // per edge of the source graph: stage index, or -1 when dropped

    size_t dropped() const;
    std::uint64_t hash() const;
};

std::optional<BipartitePartition> is_bipartite(const Graph& g);

// degree_desc: breadth-first order seeded and expanded by descending degree
enum class ColoringOrder { degree_desc, natural };

std::vector<int> greedy_coloring(const Graph& g, ColoringOrder order = ColoringOrder::degree_desc);
int color_count(const std::vector<int>& colors);

BipartiteDecomposition harary_decompose(const Graph& g, const std::vector<int>& colors);
BipartiteDecomposition single_stage(const Graph& g, const BipartitePartition& part);

// bipartite fast path, else greedy coloring + Harary
BipartiteDecomposition auto_decompose(const Graph& g);

// Stage sides must be bipartitions of their subgraphs, edge sets disjoint and
// drawn from g, and later stages must not cross earlier sides.
void validate_decomposition(const Graph& g, const BipartiteDecomposition& d);

std::string decomposition_to_string(const BipartiteDecomposition& d);
BipartiteDecomposition parse_decomposition(const Graph& g, const std::string& text,
                                           const std::string& source = "<decomposition>");

// Lattice pixel graphs ---------------------------------------------------------

struct LatticeShape {
    int width = 0, height = 0;
    int index(int r, int c) const { return r * width + c; }
    bool operator==(const LatticeShape&) const = default;
};

// Removed links between lattice pixels, stored as (min index, max index).
struct LinkMask {
    LatticeShape shape;
    std::vector<std::pair<int, int>> links; // sorted, unique

    bool contains(int a, int b) const;
    void add(int a, int b);
    void finalize();
};

struct ImageGraphSpec {
    int width = 0, height = 0;
    int connectivity = 8;
    std::optional<LinkMask> mask;
};

struct ImageGraph {
    Graph graph;
    BipartiteDecomposition decomposition;
    LatticeShape shape;
};

ImageGraph image_graph(const ImageGraphSpec& spec);

// stage 1: horizontal/vertical links, checkerboard; stage 2: diagonals, row parity
BipartiteDecomposition decompose_lattice(const Graph& g, LatticeShape shape);

enum class CoarsenScheme { two_hop, lattice8 };

struct CoarsenResult {
    Graph graph;
    std::vector<int> kept;     // fine index of each coarse node
    std::vector<int> isolated; // coarse nodes with no links (two_hop only)
    LatticeShape shape;        // lattice8 only
};

CoarsenResult coarsen_two_hop(const Graph& g, const std::vector<int>& keep);
// keep must be the even-row, even-column pixels
CoarsenResult coarsen_lattice8(const Graph& g, LatticeShape shape);
CoarsenResult coarsen(const Graph& g, const std::vector<int>& keep, CoarsenScheme scheme,
                      const LatticeShape* shape = nullptr);

} // namespace graphbior
