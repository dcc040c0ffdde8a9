#pragma once

#include "graphbior/poly.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace graphbior {

inline constexpr int kMaxDesignK = 20;

// Maximally flat half-band product kernel. Designed in l = lambda - 1 as
// (1+l)^K R(l), then mirrored so the K zeros sit at lambda = 2 and p(0) = 2.
struct HalfBandKernel {
    int K = 0;
    int M = 0;            // K - 1
    Polynomial residual;  // R(l), R(0) = 1, degree K-1
    std::vector<long double> residual_ld; // same, unrounded
    Polynomial centered;  // p(1 + l): 1 + odd powers only
    Polynomial p;         // p(lambda), lowpass orientation

    // the unmirrored kernel with K zeros at lambda = 0
    Polynomial unmirrored() const { return mirror(p); }
};

HalfBandKernel design_halfband(int K);

// Residual roots of p in lambda (the K-1 roots that are not at 2), sorted.
std::vector<std::complex<double>> residual_roots(const HalfBandKernel& hb);

struct KernelSet {
    Polynomial h0, h1, g0, g1;
    int k0 = 0, k1 = 0;
    double theta = 0.0;
    double gain_low = 1.0, gain_high = 1.0;
    double riesz_A = 0.0, riesz_B = 0.0;
    double scale_split = 1.0; // s applied as h0 *= s, g0 /= s, relative to h0(1) = g0(1) = 1
    // the same kernels in l = lambda - 1; well conditioned on [0, 2] for long kernels
    Polynomial h0c, h1c, g0c, g1c;
};

// Derive any missing centered kernel from its lambda form.
void fill_centered(KernelSet& ks);

// One way of handing the residual roots to h0 and g0.
struct Split {
    std::vector<std::complex<double>> h0_roots; // residual part only
    std::vector<std::complex<double>> g0_roots;
    double theta = 0.0;                         // at h0(1) = g0(1) = 1
};

// 100 uniform points on [0, 2], endpoints included.
const std::vector<double>& theta_grid();

// Every conjugate-consistent split, theta filled in. Empty when infeasible.
std::vector<Split> enumerate_splits(const HalfBandKernel& hb, int k0, int k1);

// Kernels for a given split and scale; theta and sampled Riesz bounds filled in.
KernelSet kernels_from_split(const HalfBandKernel& hb, int k0, int k1, const Split& split,
                             double s);

// Theta of a split as a function of the scale s.
double split_theta(const Split& split, int k0, int k1, double s);

KernelSet factorize(const HalfBandKernel& hb, int k0, int k1);
KernelSet design_kernels(int k0, int k1);

// Nearest (k0', k0'+k1'= K) pair with a feasible split, or {0,0}.
std::pair<int, int> nearest_feasible(int k0, int k1);

struct KernelReport {
    double max_pr_deviation = 0;       // |g0 h0 + g1 h1 - 2|
    double max_alias_deviation = 0;    // |g0 h0(2-l) - g1 h1(2-l)|
    double max_halfband_deviation = 0; // |h0 g0 + h0(2-l) g0(2-l) - 2|
    double mirror_h1_deviation = 0;    // h1 vs g0(2 - l), relative coefficients
    double mirror_g1_deviation = 0;    // g1 vs h0(2 - l)
    double theta = 0, A = 0, B = 0;
    double gain_low = 0, gain_high = 0;
    std::vector<double> lambda, C, D;
    bool perfect_reconstruction(double tol = 1e-8) const
    {
        return max_pr_deviation <= tol && max_alias_deviation <= tol;
    }
};

KernelReport verify_kernelset(const KernelSet& ks);

// Degree of the longer lowpass kernel; equals k0 + k1 for designed sets.
int filter_length(const KernelSet& ks);

// Gains from the kernels: 1/|h0(0)| and 1/|h1(2)|.
void fill_gains(KernelSet& ks);

std::uint64_t kernel_hash(const KernelSet& ks);

// Four rows h0, h1, g0, g1, ascending coefficients at 17 significant digits.
std::string kernels_to_csv(const KernelSet& ks);
// k0, k1 inferred from the zeros of h1 at 0; gains recomputed.
KernelSet parse_kernels_csv(const std::string& text, const std::string& source = "<kernels>");

// Published reference rows, highest degree first.
struct Table2Row {
    int k0, k1;
    std::vector<double> h1_desc;
    std::vector<double> h0_desc;
};
const std::vector<Table2Row>& table2();
Polynomial from_descending(const std::vector<double>& desc);
const Table2Row* find_table2(int k0, int k1);

struct Table2Comparison {
    double h1_root_distance = 0;   // largest matched root distance, designed vs published h1
    double rounded_root_distance = 0; // same, designed h1 rounded to the published digits first
    double h0_coeff_distance = 0;  // max |s h0 - published|, least-squares s
    double h1_coeff_distance = 0;
    double product_distance = 0;   // h0 g0 from the published rows vs p, in l = lambda - 1,
                                   // worst relative error over nonzero coefficients
    double product_zero_distance = 0; // structurally zero coefficients, relative to the largest
};
Table2Comparison compare_table2(const Table2Row& row, const KernelSet& ks);

} // namespace graphbior
