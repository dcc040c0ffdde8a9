#pragma once

#include "graphbior/bipartite.hpp"
#include "graphbior/graph.hpp"
#include "graphbior/kernels.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace graphbior {

enum class Variant { nonzero_dc, zero_dc };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct Coarsening {
    CoarsenScheme scheme = CoarsenScheme::two_hop;
    std::optional<LatticeShape> lattice; // required by lattice8
};

struct FilterbankConfig {
    KernelSet kernels;
    Variant variant = Variant::nonzero_dc;
    bool gain_compensation = true;
    int levels = 1;
    Coarsening coarsening;
};

// levels >= 1 and kernels reconstruct perfectly to 1e-8
void validate_config(const FilterbankConfig& cfg);

struct TwoChannel {
    Signal low;  // zero on H
    Signal high; // zero on L
};

// Nodes with no edges in b pass through unfiltered on their own side.
TwoChannel analyze_one(const Graph& b, const BipartitePartition& part, const KernelSet& ks,
                       const Signal& f, Variant variant, bool gc);
Signal synthesize_one(const Graph& b, const BipartitePartition& part, const KernelSet& ks,
                      const Signal& low, const Signal& high, Variant variant, bool gc);

struct ChannelCoefficients {
    std::string bits;          // one 'L'/'H' per stage
    std::vector<int> nodes;    // level-local node indices, ascending
    std::vector<double> values;
    double gain = 1.0;         // product of per-stage gains, applied when gc is on
};

struct LevelCoefficients {
    Graph graph;
    BipartiteDecomposition decomposition;
    std::optional<LatticeShape> lattice;
    std::vector<int> node_ids; // original node id of every level-local node
    std::vector<ChannelCoefficients> channels; // the all-low cell only at the deepest level
    size_t passthrough = 0;    // stage-isolated node visits
};

struct CoefficientTree {
    std::vector<LevelCoefficients> levels;
    Variant variant = Variant::nonzero_dc;
    bool gain_compensation = true;
    int k0 = 0, k1 = 0;
    std::uint64_t graph_hash = 0;
    std::uint64_t kernel_hash = 0;
    std::uint64_t config_hash = 0;

    size_t coefficient_count() const;
};

std::uint64_t config_hash(const Graph& g, const BipartiteDecomposition& d,
                          const FilterbankConfig& cfg);

CoefficientTree analyze(const Graph& g, const BipartiteDecomposition& decomp,
                        const FilterbankConfig& cfg, const Signal& f);
Signal synthesize(const Graph& g, const BipartiteDecomposition& decomp,
                  const FilterbankConfig& cfg, const CoefficientTree& tree);

CoefficientTree sparsify(const CoefficientTree& tree, double keep_fraction);

// detail coefficients: everything but the deepest all-low cell
size_t detail_count(const CoefficientTree& tree);

std::string coefficient_dump(const CoefficientTree& tree);

// Dense operators on one bipartite graph, verification scale only.
struct TransferOperators {
    Eigen::MatrixXd T_eq, T_alias;
};

TransferOperators transfer_operators(const Graph& b, const BipartitePartition& part,
                                     const KernelSet& ks, Basis basis);
// 1/2 (I + J) H0 + 1/2 (I - J) H1, without gain compensation
Eigen::MatrixXd analysis_operator(const Graph& b, const BipartitePartition& part,
                                  const KernelSet& ks, Variant variant);

} // namespace graphbior
