#pragma once

#include "graphbior/bipartite.hpp"
#include "graphbior/filterbank.hpp"
#include "graphbior/graph.hpp"
#include "graphbior/kernels.hpp"

#include <vector>

namespace graphbior {

struct ThetaResult {
    double A = 0, B = 0, theta = 0;
};

ThetaResult theta_of(const Polynomial& h0, const Polynomial& h1, const std::vector<double>& grid);
ThetaResult theta_from_values(const std::vector<double>& h0, const std::vector<double>& h1);
ThetaResult theta_from_bounds(double A, double B);

// All-source shortest path lengths (Dijkstra); +inf between components.
Eigen::MatrixXd distance_matrix(const Graph& g);

double spatial_spread(const Graph& g, const Signal& f);
double spatial_spread(const Eigen::MatrixXd& dist, const Signal& f);

// responses: column n is the transform's response to an impulse at n
double spatial_spread_tx(const Graph& g, const Eigen::MatrixXd& responses,
                         std::vector<double>* per_node = nullptr);
double spatial_spread_tx(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& responses,
                         std::vector<double>* per_node = nullptr);

double spectral_spread(const Graph& g, const Signal& f);
double spectral_spread(const SpectralDecomposition& sd, const Signal& f);
double spectral_spread_tx(const Graph& g, const Eigen::MatrixXd& responses);
double spectral_spread_tx(const SpectralDecomposition& sd, const Eigen::MatrixXd& responses);

// Impulse responses of h(L) in the symmetric basis.
Eigen::MatrixXd kernel_responses(const Graph& g, const Polynomial& kernel);

// Indicator of lambda <= 1, realised through the eigenbasis.
Eigen::MatrixXd ideal_halfband_responses(const SpectralDecomposition& sd);

struct RieszResult {
    double A = 0, B = 0, theta = 0;
    // zeroDC only: interval predicted from the nonzeroDC bounds
    double predicted_lo = 0, predicted_hi = 0;
    bool has_prediction = false;
};

inline constexpr int kMaxRieszNodes = 2048;

RieszResult riesz_exact(const Graph& g, const BipartitePartition& part, const KernelSet& ks,
                        Variant variant);

inline constexpr double kSnrCap = 300.0;

double snr(const Signal& ref, const Signal& test);
double psnr(const std::vector<double>& ref, const std::vector<double>& test, double peak = 255.0);

} // namespace graphbior
