#pragma once

#include "graphbior/poly.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace graphbior {

using Signal = Eigen::VectorXd;
using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Edge {
    int u = 0, v = 0;
    double w = 1.0;
};

// Undirected weighted graph. Edges are stored with u < v, sorted, unique.
class Graph {
public:
    Graph() = default;
    Graph(int n, std::vector<Edge> edges);

    int n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    size_t num_edges() const { return edges_.size(); }
    const std::vector<double>& degree() const { return degree_; }
    const SparseRow& adjacency() const { return adj_; }
    bool connected() const { return connected_; }
    bool has_isolated() const;
    double min_degree() const;
    double max_degree() const;
    std::uint64_t hash() const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> degree_;
    SparseRow adj_;
    bool connected_ = true;
};

// connected component label per node; returns the count
int components(const Graph& g, std::vector<int>& label);

// n-node path / cycle / complete graphs with unit weights
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph complete_graph(int n);

enum class LaplacianKind { unnormalized, symmetric_normalized, random_walk };
enum class Basis { symmetric, random_walk };

// Sparse matrix-free Laplacian. With allow_isolated, zero-degree rows are zero.
class LaplacianOperator {
public:
    LaplacianOperator(const Graph& g, LaplacianKind kind, bool allow_isolated = false);
    Signal apply(const Signal& x) const;
    int n() const { return static_cast<int>(deg_.size()); }
    LaplacianKind kind() const { return kind_; }

private:
    const SparseRow* adj_;
    LaplacianKind kind_;
    Eigen::VectorXd deg_, dinv_, dinv_sqrt_;
};

LaplacianOperator laplacian(const Graph& g, LaplacianKind kind);

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // columns, orthonormal
};

inline constexpr int kMaxDenseNodes = 4096;

SpectralDecomposition eig(const Graph& g);

// [first, last) index ranges of eigenvalues within tol of their neighbours
std::vector<std::pair<int, int>> eigenspace_groups(const SpectralDecomposition& sd,
                                                   double tol = 1e-8);

Signal spectral_filter(const Graph& g, const Polynomial& kernel, const Signal& f, Basis basis);
Signal spectral_filter(const LaplacianOperator& op, const Polynomial& kernel, const Signal& f);
// kernel given in l = lambda - 1, applied through Horner on (L - I)
Signal spectral_filter_centered(const LaplacianOperator& op, const Polynomial& kernel,
                                const Signal& f);

// h(L) as a dense matrix, one impulse response per column
Eigen::MatrixXd dense_kernel_matrix(const Graph& g, const Polynomial& kernel, Basis basis);
Eigen::MatrixXd dense_kernel_matrix_centered(const Graph& g, const Polynomial& kernel, Basis basis);

using BetaFunction = std::vector<int>; // +1 on L, -1 on H
enum class Channel { low, high };

Signal du_apply(const BetaFunction& beta, Channel channel, const Signal& f);

double check_spectral_folding(const Graph& g, const BetaFunction& beta);

Graph read_graph(const std::filesystem::path& path);
Graph parse_graph(const std::string& text, const std::string& source = "<graph>");
std::string graph_to_string(const Graph& g);
void write_graph(const std::filesystem::path& path, const Graph& g);

} // namespace graphbior
