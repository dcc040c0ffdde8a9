#include "graphbior/metrics.hpp"
#include "graphbior/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <Eigen/SVD>

namespace graphbior {

ThetaResult theta_from_bounds(double A, double B)
{
    ThetaResult r{A, B, 0.0};
    const double s = std::fabs(B + A);
    r.theta = s > 0 ? 1.0 - std::fabs(B - A) / s : 0.0;
    return r;
}

ThetaResult theta_from_values(const std::vector<double>& h0, const std::vector<double>& h1)
{
    if (h0.empty() || h0.size() != h1.size())
        throw ValidationError("theta needs matching, nonempty samples");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (size_t i = 0; i < h0.size(); ++i) {
        double c = 0.5 * (h0[i] * h0[i] + h1[i] * h1[i]);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    return theta_from_bounds(std::sqrt(lo), std::sqrt(hi));
}

ThetaResult theta_of(const Polynomial& h0, const Polynomial& h1, const std::vector<double>& grid)
{
    if (grid.empty())
        throw ValidationError("theta grid is empty");
    std::vector<double> a(grid.size()), b(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > 2.0)
            throw ValidationError("theta grid must lie in [0, 2]");
        a[i] = eval(h0, grid[i]);
        b[i] = eval(h1, grid[i]);
    }
    return theta_from_values(a, b);
}

Eigen::MatrixXd distance_matrix(const Graph& g)
{
    const int n = g.n();
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd D = Eigen::MatrixXd::Constant(n, n, inf);
    const auto& A = g.adjacency();
    using Item = std::pair<double, int>;
    for (int s = 0; s < n; ++s) {
        auto col = D.col(s);
        col[s] = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.emplace(0.0, s);
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > col[u])
                continue;
            for (SparseRow::InnerIterator it(A, u); it; ++it) {
                const auto v = static_cast<int>(it.col());
                const double nd = d + it.value();
                if (nd < col[v]) {
                    col[v] = nd;
                    pq.emplace(nd, v);
                }
            }
        }
    }
    return D;
}

double spatial_spread(const Eigen::MatrixXd& dist, const Signal& f)
{
    const double e = f.squaredNorm();
    if (!(e > 0))
        throw ValidationError("undefined spread");
    const auto n = f.size();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (f[j] == 0.0)
                continue;
            const double d = dist(i, j);
            acc += d * d * f[j] * f[j];
        }
        best = std::min(best, acc / e);
    }
    return best;
}

double spatial_spread(const Graph& g, const Signal& f)
{
    return spatial_spread(distance_matrix(g), f);
}

double spatial_spread_tx(const Eigen::MatrixXd& dist, const Eigen::MatrixXd& responses,
                         std::vector<double>* per_node)
{
    const auto n = responses.cols();
    if (n == 0)
        throw ValidationError("empty transform");
    double sum = 0;
    if (per_node)
        per_node->assign(static_cast<size_t>(n), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = spatial_spread(dist, responses.col(j));
        if (per_node)
            (*per_node)[static_cast<size_t>(j)] = s;
        sum += s;
    }
    return sum / static_cast<double>(n);
}

double spatial_spread_tx(const Graph& g, const Eigen::MatrixXd& responses,
                         std::vector<double>* per_node)
{
    return spatial_spread_tx(distance_matrix(g), responses, per_node);
}

namespace {

double pmf_variance(const Eigen::VectorXd& lambda, const Eigen::VectorXd& weight)
{
    const double total = weight.sum();
    if (!(total > 0))
        throw ValidationError("undefined spread");
    const Eigen::VectorXd pmf = weight / total;
    const double mu = lambda.dot(pmf);
    return (lambda.array() - mu).square().matrix().dot(pmf);
}

} // namespace

double spectral_spread(const SpectralDecomposition& sd, const Signal& f)
{
    const Eigen::VectorXd a = sd.eigenvectors.transpose() * f;
    return pmf_variance(sd.eigenvalues, a.array().square().matrix());
}

double spectral_spread(const Graph& g, const Signal& f)
{
    return spectral_spread(eig(g), f);
}

double spectral_spread_tx(const SpectralDecomposition& sd, const Eigen::MatrixXd& responses)
{
    const Eigen::MatrixXd M = sd.eigenvectors.transpose() * responses;
    const Eigen::VectorXd w = M.rowwise().squaredNorm() / static_cast<double>(responses.cols());
    return pmf_variance(sd.eigenvalues, w);
}

double spectral_spread_tx(const Graph& g, const Eigen::MatrixXd& responses)
{
    return spectral_spread_tx(eig(g), responses);
}

Eigen::MatrixXd kernel_responses(const Graph& g, const Polynomial& kernel)
{
    return dense_kernel_matrix(g, kernel, Basis::symmetric);
}

Eigen::MatrixXd ideal_halfband_responses(const SpectralDecomposition& sd)
{
    Eigen::VectorXd ind(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < ind.size(); ++i)
        ind[i] = sd.eigenvalues[i] <= 1.0 + 1e-9 ? 1.0 : 0.0;
    return sd.eigenvectors * ind.asDiagonal() * sd.eigenvectors.transpose();
}

RieszResult riesz_exact(const Graph& g, const BipartitePartition& part, const KernelSet& ks,
                        Variant variant)
{
    if (g.n() > kMaxRieszNodes)
        throw ValidationError("riesz_exact is limited to " + std::to_string(kMaxRieszNodes) +
                              " nodes");
    auto bounds = [&](Variant v) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(analysis_operator(g, part, ks, v));
        const auto& s = svd.singularValues();
        return std::make_pair(s.minCoeff(), s.maxCoeff());
    };
    RieszResult r;
    auto [A, B] = bounds(variant);
    auto th = theta_from_bounds(A, B);
    r.A = A;
    r.B = B;
    r.theta = th.theta;
    if (variant == Variant::zero_dc) {
        auto [A0, B0] = bounds(Variant::nonzero_dc);
        const double ratio = g.min_degree() / g.max_degree();
        r.predicted_lo = A0 * std::sqrt(ratio);
        r.predicted_hi = B0 / std::sqrt(ratio);
        r.has_prediction = true;
    }
    return r;
}

double snr(const Signal& ref, const Signal& test)
{
    if (ref.size() != test.size())
        throw ValidationError("mismatched lengths");
    const double e = ref.squaredNorm();
    if (!(e > 0))
        throw ValidationError("undefined SNR");
    const double err = (ref - test).squaredNorm();
    if (err == 0.0)
        return kSnrCap;
    return std::min(kSnrCap, 10.0 * std::log10(e / err));
}

double psnr(const std::vector<double>& ref, const std::vector<double>& test, double peak)
{
    if (ref.size() != test.size() || ref.empty())
        throw ValidationError("mismatched lengths");
    double mse = 0;
    for (size_t i = 0; i < ref.size(); ++i)
        mse += (ref[i] - test[i]) * (ref[i] - test[i]);
    mse /= static_cast<double>(ref.size());
    if (mse == 0.0)
        return kSnrCap;
    return std::min(kSnrCap, 10.0 * std::log10(peak * peak / mse));
}

} // namespace graphbior
