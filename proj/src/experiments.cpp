#include "graphbior/experiments.hpp"
#include "graphbior/error.hpp"
#include "graphbior/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace graphbior {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : eng_(splitmix64(seed ^ splitmix64(stream + 0x6a09e667f3bcc909ULL)))
{
}

double Rng::uniform()
{
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

int Rng::below(int n)
{
    if (n <= 0)
        throw ValidationError("empty range");
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t x;
    do {
        x = eng_();
    } while (x >= limit);
    return static_cast<int>(x % un);
}

RandomBipartite random_bipartite(int n_per_side, std::uint64_t seed, double p)
{
    if (n_per_side < 2)
        throw ValidationError("n_per_side must be at least 2");
    const int N = 2 * n_per_side;
    if (p < 0)
        p = 2.0 * std::log(static_cast<double>(N)) / N;
    Rng rng(seed, 1);
    std::vector<Edge> edges;
    std::vector<int> deg(static_cast<size_t>(N), 0);
    for (int i = 0; i < n_per_side; ++i)
        for (int j = n_per_side; j < N; ++j)
            if (rng.uniform() < p) {
                edges.push_back({i, j, 1.0});
                ++deg[static_cast<size_t>(i)];
                ++deg[static_cast<size_t>(j)];
            }
    std::vector<int> map(static_cast<size_t>(N), -1);
    RandomBipartite out;
    int next = 0;
    for (int v = 0; v < N; ++v) {
        if (deg[static_cast<size_t>(v)] == 0) {
            ++out.removed;
            continue;
        }
        map[static_cast<size_t>(v)] = next++;
        out.partition.side.push_back(v < n_per_side ? Side::L : Side::H);
    }
    for (auto& e : edges) {
        e.u = map[static_cast<size_t>(e.u)];
        e.v = map[static_cast<size_t>(e.v)];
    }
    out.graph = Graph(next, std::move(edges));
    return out;
}

Graph random_connected_graph(int n, double p, std::uint64_t seed, bool bipartite)
{
    if (n < 2)
        throw ValidationError("need at least two nodes");
    Rng rng(seed, 2);
    std::vector<Edge> edges;
    std::vector<std::vector<bool>> has(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
    auto add = [&](int a, int b) {
        if (a == b || has[static_cast<size_t>(a)][static_cast<size_t>(b)])
            return;
        has[static_cast<size_t>(a)][static_cast<size_t>(b)] = has[static_cast<size_t>(b)][static_cast<size_t>(a)] = true;
        edges.push_back({a, b, 0.5 + rng.uniform()});
    };
    for (int i = 1; i < n; ++i) {
        int j;
        if (bipartite) {
            // earlier node of the other parity
            const int count = (i + (i % 2 == 0 ? 0 : 1)) / 2;
            const int k = rng.below(std::max(count, 1));
            j = (i % 2 == 0) ? 2 * k + 1 : 2 * k;
            if (j >= i)
                j = i - 1;
        } else {
            j = rng.below(i);
        }
        add(j, i);
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (bipartite && (a % 2) == (b % 2))
                continue;
            if (rng.uniform() < p)
                add(a, b);
        }
    return Graph(n, std::move(edges));
}

PlanarGraph synthetic_planar(int n, std::uint64_t seed)
{
    if (n < 4)
        throw ValidationError("synthetic planar graph needs at least 4 nodes");
    const int s = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    Rng rng(seed, 3);
    PlanarGraph pg;
    const int N = s * s;
    pg.xy.resize(static_cast<size_t>(N));
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c) {
            double x = c + 0.6 * (rng.uniform() - 0.5);
            double y = r + 0.6 * (rng.uniform() - 0.5);
            pg.xy[static_cast<size_t>(r * s + c)] = {(x + 0.5) / s, (y + 0.5) / s};
        }
    std::vector<Edge> cand;
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c) {
            const int a = r * s + c;
            if (c + 1 < s)
                cand.push_back({a, a + 1, 1.0});
            if (r + 1 < s)
                cand.push_back({a, a + s, 1.0});
            if (r + 1 < s && c + 1 < s)
                cand.push_back({a + 1, a + s, 1.0});
        }
    pg.colors.resize(static_cast<size_t>(N));
    for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c)
            pg.colors[static_cast<size_t>(r * s + c)] = (r + 2 * c) % 3;
    // random spanning tree (Kruskal on random keys), then keep 70% of the rest
    std::vector<double> key(cand.size());
    for (auto& k : key)
        k = rng.uniform();
    std::vector<size_t> order(cand.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return key[a] < key[b]; });
    std::vector<int> parent(static_cast<size_t>(N));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    std::vector<bool> in_tree(cand.size(), false);
    for (size_t i : order) {
        int a = find(cand[i].u), b = find(cand[i].v);
        if (a != b) {
            parent[static_cast<size_t>(a)] = b;
            in_tree[i] = true;
        }
    }
    std::vector<Edge> edges;
    for (size_t i = 0; i < cand.size(); ++i)
        if (in_tree[i] || rng.uniform() < 0.7)
            edges.push_back(cand[i]);
    pg.graph = Graph(N, std::move(edges));
    return pg;
}

Signal piecewise_constant_signal(const PlanarGraph& pg)
{
    Signal f(static_cast<Eigen::Index>(pg.xy.size()));
    for (size_t i = 0; i < pg.xy.size(); ++i) {
        const double x = pg.xy[i][0], y = pg.xy[i][1];
        double v = 1.0;
        if (x > 0.55)
            v = 3.0;
        if (y < 0.3 && x < 0.55)
            v = 5.0;
        if ((x - 0.3) * (x - 0.3) + (y - 0.65) * (y - 0.65) < 0.04)
            v = -2.0;
        f[static_cast<Eigen::Index>(i)] = v;
    }
    return f;
}

Image disk_scene(int size)
{
    struct Disk {
        double cx, cy, r, v;
    };
    const double k = size / 128.0;
    const Disk disks[] = {{40, 40, 22, 200}, {90, 34, 15, 120}, {74, 88, 28, 230},
                          {28, 100, 13, 90}, {108, 104, 10, 170}};
    Image img;
    img.width = img.height = size;
    img.pixels.assign(static_cast<size_t>(size * size), 40.0);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c)
            for (const auto& d : disks) {
                const double dx = c + 0.5 - d.cx * k, dy = r + 0.5 - d.cy * k;
                if (dx * dx + dy * dy <= d.r * d.r * k * k)
                    img.pixels[static_cast<size_t>(r * size + c)] = d.v;
            }
    return img;
}

TransformResult run_transform(const Graph& g, const BipartiteDecomposition& d,
                              const FilterbankConfig& cfg, const Signal& f, double keep)
{
    TransformResult res;
    res.tree = analyze(g, d, cfg, f);
    res.coefficient_count = res.tree.coefficient_count();
    if (res.coefficient_count != static_cast<size_t>(g.n()))
        throw NumericalError("critical sampling violated: " + std::to_string(res.coefficient_count) +
                             " coefficients for " + std::to_string(g.n()) + " nodes");
    const double range = f.size() ? f.maxCoeff() - f.minCoeff() : 0.0;
    for (size_t l = 0; l < res.tree.levels.size(); ++l) {
        const auto& lv = res.tree.levels[l];
        const bool last = l + 1 == res.tree.levels.size();
        for (size_t c = 0; c < lv.channels.size(); ++c) {
            if (last && c == 0)
                continue;
            const double gn = res.tree.gain_compensation ? 1.0 : lv.channels[c].gain;
            for (double v : lv.channels[c].values)
                if (std::fabs(v * gn) > 0.01 * range)
                    ++res.large_details;
        }
    }
    res.kept = keep < 1.0 ? sparsify(res.tree, keep) : res.tree;
    res.reconstruction = synthesize(g, d, cfg, res.kept);
    res.snr = snr(f, res.reconstruction);
    return res;
}

ImageTransform run_image_transform(const Image& img, FilterbankConfig cfg, double keep,
                                   const std::optional<LinkMask>& mask)
{
    ImageTransform out;
    ImageGraphSpec spec{img.width, img.height, 8, mask};
    out.graph = image_graph(spec);
    out.masked_links = mask ? mask->links.size() : 0;
    cfg.coarsening.scheme = CoarsenScheme::lattice8;
    cfg.coarsening.lattice = out.graph.shape;
    Signal f = Eigen::Map<const Signal>(img.pixels.data(), static_cast<Eigen::Index>(img.pixels.size()));
    out.result = run_transform(out.graph.graph, out.graph.decomposition, cfg, f, keep);
    std::vector<double> rec(out.result.reconstruction.data(),
                            out.result.reconstruction.data() + out.result.reconstruction.size());
    out.psnr = psnr(img.pixels, rec, 255.0);
    return out;
}

} // namespace graphbior
