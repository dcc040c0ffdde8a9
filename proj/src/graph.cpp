#include "graphbior/graph.hpp"
#include "graphbior/error.hpp"
#include "graphbior/io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace graphbior {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges))
{
    if (n < 0)
        throw ValidationError("negative node count");
    for (auto& e : edges_) {
        if (e.u == e.v)
            throw ValidationError("self-loop at node " + std::to_string(e.u));
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw ValidationError("edge endpoint out of range");
        if (!(e.w > 0) || !std::isfinite(e.w))
            throw ValidationError("edge weight must be positive and finite");
        if (e.u > e.v)
            std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
            throw ValidationError("duplicate edge " + std::to_string(edges_[i].u) + " " +
                                  std::to_string(edges_[i].v));

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(edges_.size() * 2);
    for (const auto& e : edges_) {
        trip.emplace_back(e.u, e.v, e.w);
        trip.emplace_back(e.v, e.u, e.w);
    }
    adj_.resize(n, n);
    adj_.setFromTriplets(trip.begin(), trip.end());
    adj_.makeCompressed();

    // summed in row order so that A*1 reproduces the degree bit for bit
    degree_.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (SparseRow::InnerIterator it(adj_, i); it; ++it)
            s += it.value() * 1.0;
        degree_[static_cast<size_t>(i)] = s;
    }
    std::vector<int> lab;
    connected_ = components(*this, lab) <= 1;
}

bool Graph::has_isolated() const
{
    return std::any_of(degree_.begin(), degree_.end(), [](double d) { return d == 0.0; });
}

double Graph::min_degree() const
{
    return degree_.empty() ? 0.0 : *std::min_element(degree_.begin(), degree_.end());
}

double Graph::max_degree() const
{
    return degree_.empty() ? 0.0 : *std::max_element(degree_.begin(), degree_.end());
}

std::uint64_t Graph::hash() const
{
    Fnv1a h;
    h.i64(n_);
    for (const auto& e : edges_) {
        h.i64(e.u);
        h.i64(e.v);
        h.f64(e.w);
    }
    return h.value();
}

int components(const Graph& g, std::vector<int>& label)
{
    const int n = g.n();
    label.assign(static_cast<size_t>(n), -1);
    const auto& A = g.adjacency();
    int count = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
        if (label[static_cast<size_t>(s)] >= 0)
            continue;
        label[static_cast<size_t>(s)] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (SparseRow::InnerIterator it(A, u); it; ++it) {
                auto v = static_cast<size_t>(it.col());
                if (label[v] < 0) {
                    label[v] = count;
                    stack.push_back(static_cast<int>(v));
                }
            }
        }
        ++count;
    }
    return count;
}

Graph path_graph(int n)
{
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i)
        e.push_back({i, i + 1, 1.0});
    return Graph(n, std::move(e));
}

Graph cycle_graph(int n)
{
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        e.push_back({i, (i + 1) % n, 1.0});
    return Graph(n, std::move(e));
}

Graph complete_graph(int n)
{
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            e.push_back({i, j, 1.0});
    return Graph(n, std::move(e));
}

LaplacianOperator::LaplacianOperator(const Graph& g, LaplacianKind kind, bool allow_isolated)
    : adj_(&g.adjacency()), kind_(kind)
{
    const int n = g.n();
    deg_.resize(n);
    dinv_.resize(n);
    dinv_sqrt_.resize(n);
    for (int i = 0; i < n; ++i) {
        double d = g.degree()[static_cast<size_t>(i)];
        if (d == 0.0 && !allow_isolated && kind != LaplacianKind::unnormalized)
            throw ValidationError("isolated vertex " + std::to_string(i));
        deg_[i] = d;
        dinv_[i] = d > 0 ? 1.0 / d : 0.0;
        dinv_sqrt_[i] = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
    }
}

Signal LaplacianOperator::apply(const Signal& x) const
{
    switch (kind_) {
    case LaplacianKind::unnormalized:
        return deg_.cwiseProduct(x) - (*adj_) * x;
    case LaplacianKind::symmetric_normalized: {
        Signal z = dinv_sqrt_.cwiseProduct(x);
        Signal t = (*adj_) * z;
        Signal y = x - dinv_sqrt_.cwiseProduct(t);
        for (Eigen::Index i = 0; i < y.size(); ++i)
            if (deg_[i] == 0.0)
                y[i] = 0.0;
        return y;
    }
    case LaplacianKind::random_walk: {
        // divide rather than multiply by 1/d: keeps L_r * 1 exactly zero
        Signal t = (*adj_) * x;
        Signal y(x.size());
        for (Eigen::Index i = 0; i < y.size(); ++i)
            y[i] = deg_[i] == 0.0 ? 0.0 : x[i] - t[i] / deg_[i];
        return y;
    }
    }
    return x;
}

LaplacianOperator laplacian(const Graph& g, LaplacianKind kind)
{
    return LaplacianOperator(g, kind);
}

SpectralDecomposition eig(const Graph& g)
{
    const int n = g.n();
    if (n > kMaxDenseNodes)
        throw ValidationError("graph has " + std::to_string(n) +
                              " nodes; dense eigendecomposition is limited to " +
                              std::to_string(kMaxDenseNodes) +
                              " (use polynomial spectral_filter instead)");
    if (g.has_isolated())
        throw ValidationError("isolated vertex");
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
    const auto& d = g.degree();
    for (const auto& e : g.edges()) {
        double v = -e.w / std::sqrt(d[static_cast<size_t>(e.u)] * d[static_cast<size_t>(e.v)]);
        L(e.u, e.v) = v;
        L(e.v, e.u) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigensolver did not converge");
    SpectralDecomposition sd{es.eigenvalues(), es.eigenvectors()};
    for (int j = 0; j < n; ++j) {
        auto col = sd.eigenvectors.col(j);
        for (int i = 0; i < n; ++i) {
            if (std::fabs(col[i]) > 1e-12) {
                if (col[i] < 0)
                    col *= -1.0;
                break;
            }
        }
    }
    return sd;
}

std::vector<std::pair<int, int>> eigenspace_groups(const SpectralDecomposition& sd, double tol)
{
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(sd.eigenvalues.size());
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || sd.eigenvalues[i] - sd.eigenvalues[i - 1] > tol) {
            out.emplace_back(start, i);
            start = i;
        }
    }
    return out;
}

Signal spectral_filter(const LaplacianOperator& op, const Polynomial& kernel, const Signal& f)
{
    if (f.size() != op.n())
        throw ValidationError("signal length does not match graph");
    const auto& c = kernel.coeffs();
    if (c.empty())
        return Signal::Zero(f.size());
    Signal y = c.back() * f;
    for (size_t j = c.size() - 1; j-- > 0;) {
        y = op.apply(y);
        if (c[j] != 0.0)
            y += c[j] * f;
    }
    return y;
}

Signal spectral_filter_centered(const LaplacianOperator& op, const Polynomial& kernel,
                                const Signal& f)
{
    if (f.size() != op.n())
        throw ValidationError("signal length does not match graph");
    const auto& c = kernel.coeffs();
    if (c.empty())
        return Signal::Zero(f.size());
    Signal y = c.back() * f;
    for (size_t j = c.size() - 1; j-- > 0;) {
        y = op.apply(y) - y;
        if (c[j] != 0.0)
            y += c[j] * f;
    }
    return y;
}

Signal spectral_filter(const Graph& g, const Polynomial& kernel, const Signal& f, Basis basis)
{
    LaplacianOperator op(g, basis == Basis::symmetric ? LaplacianKind::symmetric_normalized
                                                      : LaplacianKind::random_walk);
    return spectral_filter(op, kernel, f);
}

Eigen::MatrixXd dense_kernel_matrix(const Graph& g, const Polynomial& kernel, Basis basis)
{
    const int n = g.n();
    if (n > kMaxDenseNodes)
        throw ValidationError("dense operator size exceeded");
    LaplacianOperator op(g, basis == Basis::symmetric ? LaplacianKind::symmetric_normalized
                                                      : LaplacianKind::random_walk);
    Eigen::MatrixXd M(n, n);
    for (int j = 0; j < n; ++j)
        M.col(j) = spectral_filter(op, kernel, Signal::Unit(n, j));
    return M;
}

Eigen::MatrixXd dense_kernel_matrix_centered(const Graph& g, const Polynomial& kernel, Basis basis)
{
    const int n = g.n();
    if (n > kMaxDenseNodes)
        throw ValidationError("dense operator size exceeded");
    LaplacianOperator op(g, basis == Basis::symmetric ? LaplacianKind::symmetric_normalized
                                                      : LaplacianKind::random_walk);
    Eigen::MatrixXd M(n, n);
    for (int j = 0; j < n; ++j)
        M.col(j) = spectral_filter_centered(op, kernel, Signal::Unit(n, j));
    return M;
}

Signal du_apply(const BetaFunction& beta, Channel channel, const Signal& f)
{
    if (static_cast<Eigen::Index>(beta.size()) != f.size())
        throw ValidationError("beta length does not match signal");
    Signal y = f;
    const int keep = channel == Channel::low ? 1 : -1;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (beta[static_cast<size_t>(i)] != keep)
            y[i] = 0.0;
    return y;
}

namespace {

bool beta_is_bipartition(const Graph& g, const BetaFunction& beta)
{
    for (const auto& e : g.edges())
        if (beta[static_cast<size_t>(e.u)] == beta[static_cast<size_t>(e.v)])
            return false;
    return true;
}

} // namespace

double check_spectral_folding(const Graph& g, const BetaFunction& beta)
{
    const int n = g.n();
    if (static_cast<int>(beta.size()) != n)
        throw ValidationError("beta length does not match graph");
    for (int b : beta)
        if (b != 1 && b != -1)
            throw ValidationError("beta values must be +1 or -1");
    const bool natural = beta_is_bipartition(g, beta);
    auto sd = eig(g);
    auto groups = eigenspace_groups(sd);

    auto projector = [&](std::pair<int, int> gr) {
        const auto U = sd.eigenvectors.middleCols(gr.first, gr.second - gr.first);
        return Eigen::MatrixXd(U * U.transpose());
    };
    auto mean_lambda = [&](std::pair<int, int> gr) {
        return sd.eigenvalues.segment(gr.first, gr.second - gr.first).mean();
    };

    Eigen::VectorXd J(n);
    for (int i = 0; i < n; ++i)
        J[i] = beta[static_cast<size_t>(i)];

    double worst = 0;
    for (const auto& gr : groups) {
        const double lam = mean_lambda(gr);
        int mirror_idx = -1;
        double best = 1e300;
        for (size_t k = 0; k < groups.size(); ++k) {
            double d = std::fabs(mean_lambda(groups[k]) - (2.0 - lam));
            if (d < best) {
                best = d;
                mirror_idx = static_cast<int>(k);
            }
        }
        Eigen::MatrixXd P = projector(gr);
        Eigen::MatrixXd Pm;
        if (mirror_idx >= 0 && best <= 1e-6) {
            Pm = projector(groups[static_cast<size_t>(mirror_idx)]);
        } else {
            if (natural)
                throw NumericalError("unmirrored spectrum at lambda = " + format_double(lam));
            Pm = Eigen::MatrixXd::Zero(n, n);
        }
        Eigen::MatrixXd R = J.asDiagonal() * P - Pm * J.asDiagonal();
        worst = std::max(worst, R.cwiseAbs().maxCoeff());
    }
    return worst;
}

Graph parse_graph(const std::string& text, const std::string& source)
{
    std::istringstream is(text);
    std::string line;
    size_t lineno = 0;
    auto next_line = [&](std::string& out) {
        while (std::getline(is, out)) {
            ++lineno;
            if (out.find_first_not_of(" \t\r") != std::string::npos && out[0] != '#')
                return true;
        }
        return false;
    };
    if (!next_line(line))
        throw ValidationError(source + ": empty graph file");
    long long n = -1, m = -1;
    {
        std::istringstream hs(line);
        if (!(hs >> n >> m) || n < 0 || m < 0)
            throw ValidationError(source + ":" + std::to_string(lineno) +
                                  ": expected header 'N M'");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(m));
    for (long long k = 0; k < m; ++k) {
        if (!next_line(line))
            throw ValidationError(source + ": expected " + std::to_string(m) + " edges, found " +
                                  std::to_string(k));
        std::istringstream es(line);
        long long u, v;
        double w;
        if (!(es >> u >> v >> w))
            throw ValidationError(source + ":" + std::to_string(lineno) +
                                  ": expected 'u v w'");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ValidationError(source + ":" + std::to_string(lineno) +
                                  ": node index out of range");
        edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    }
    try {
        return Graph(static_cast<int>(n), std::move(edges));
    } catch (const ValidationError& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

Graph read_graph(const std::filesystem::path& path)
{
    return parse_graph(read_file(path), path.string());
}

std::string graph_to_string(const Graph& g)
{
    std::string out = std::to_string(g.n()) + " " + std::to_string(g.num_edges()) + "\n";
    for (const auto& e : g.edges())
        out += std::to_string(e.u) + " " + std::to_string(e.v) + " " + format_double(e.w) + "\n";
    return out;
}

void write_graph(const std::filesystem::path& path, const Graph& g)
{
    write_file_atomic(path, graph_to_string(g));
}

} // namespace graphbior
