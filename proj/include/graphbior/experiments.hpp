#pragma once

#include "graphbior/bipartite.hpp"
#include "graphbior/filterbank.hpp"
#include "graphbior/graph.hpp"
#include "graphbior/image.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace graphbior {

std::uint64_t splitmix64(std::uint64_t x);

// mt19937_64 seeded through splitmix64(seed, stream); uniform() and normal()
// are built by hand so sequences do not depend on the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
    std::uint64_t next() { return eng_(); }
    double uniform(); // [0, 1), 53 bits
    double normal();
    int below(int n); // [0, n)

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct RandomBipartite {
    Graph graph;
    BipartitePartition partition;
    int removed = 0; // isolated nodes dropped
};

// Cross-side pairs linked with probability p (default 2 ln(N)/N, N = 2 n_per_side),
// unit weights, isolated nodes removed and the rest relabelled in order.
RandomBipartite random_bipartite(int n_per_side, std::uint64_t seed, double p = -1.0);

// Random spanning tree plus extra links with probability p; weights in [0.5, 1.5].
// With bipartite set, links only join nodes of different index parity.
Graph random_connected_graph(int n, double p, std::uint64_t seed, bool bipartite);

struct PlanarGraph {
    Graph graph;
    std::vector<std::array<double, 2>> xy; // in [0, 1]^2
    std::vector<int> colors;               // proper 3-coloring
};

// Jittered grid triangulation (all diagonals one way, so 3-colorable) thinned at
// random while keeping a spanning tree.
PlanarGraph synthetic_planar(int n, std::uint64_t seed);

// Four constant regions over the unit square.
Signal piecewise_constant_signal(const PlanarGraph& pg);

// 128x128 style scene of hard-edged constant disks on a flat background.
Image disk_scene(int size = 128);

struct TransformResult {
    CoefficientTree tree;
    CoefficientTree kept;
    Signal reconstruction;
    double snr = 0;
    size_t coefficient_count = 0;
    size_t large_details = 0; // detail coefficients above 1% of the signal range
};

// analyze, check critical sampling, sparsify, synthesize
TransformResult run_transform(const Graph& g, const BipartiteDecomposition& d,
                              const FilterbankConfig& cfg, const Signal& f, double keep);

struct ImageTransform {
    TransformResult result;
    ImageGraph graph;
    double psnr = 0;
    size_t masked_links = 0;
};

ImageTransform run_image_transform(const Image& img, FilterbankConfig cfg, double keep,
                                   const std::optional<LinkMask>& mask);

} // namespace graphbior
