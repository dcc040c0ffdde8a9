#include "graphbior/bipartite.hpp"
#include "graphbior/error.hpp"
#include "graphbior/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace graphbior {

namespace {

std::uint64_t pair_key(int a, int b)
{
    if (a > b)
        std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

std::unordered_map<std::uint64_t, double> edge_lookup(const Graph& g)
{
    std::unordered_map<std::uint64_t, double> m;
    m.reserve(g.num_edges() * 2);
    for (const auto& e : g.edges())
        m.emplace(pair_key(e.u, e.v), e.w);
    return m;
}

// Nodes without edges in stage t or any later stage move to L_t.
void settle_isolated(BipartiteDecomposition& d)
{
    const size_t S = d.stages.size();
    if (S == 0)
        return;
    const int n = d.stages[0].graph.n();
    std::vector<int> later(static_cast<size_t>(n), 0); // edge count in stages > t
    for (size_t t = S; t-- > 0;) {
        auto& st = d.stages[t];
        for (int v = 0; v < n; ++v)
            if (st.graph.degree()[static_cast<size_t>(v)] == 0.0 && later[static_cast<size_t>(v)] == 0)
                st.partition.side[static_cast<size_t>(v)] = Side::L;
        for (const auto& e : st.graph.edges()) {
            ++later[static_cast<size_t>(e.u)];
            ++later[static_cast<size_t>(e.v)];
        }
    }
}

} // namespace

BetaFunction BipartitePartition::beta() const
{
    BetaFunction b(side.size());
    for (size_t i = 0; i < side.size(); ++i)
        b[i] = side[i] == Side::L ? 1 : -1;
    return b;
}

BipartitePartition BipartitePartition::from_string(const std::string& s)
{
    BipartitePartition p;
    for (char ch : s) {
        if (ch == 'L')
            p.side.push_back(Side::L);
        else if (ch == 'H')
            p.side.push_back(Side::H);
        else if (ch != '\r' && ch != '\n')
            throw ValidationError(std::string("bad side label '") + ch + "'");
    }
    return p;
}

std::string BipartitePartition::to_string() const
{
    std::string s(side.size(), 'L');
    for (size_t i = 0; i < side.size(); ++i)
        if (side[i] == Side::H)
            s[i] = 'H';
    return s;
}

bool partition_valid(const Graph& g, const BipartitePartition& part)
{
    if (static_cast<int>(part.side.size()) != g.n())
        return false;
    for (const auto& e : g.edges())
        if (part.side[static_cast<size_t>(e.u)] == part.side[static_cast<size_t>(e.v)])
            return false;
    return true;
}

size_t BipartiteDecomposition::dropped() const
{
    return static_cast<size_t>(std::count(coverage.begin(), coverage.end(), -1));
}

std::uint64_t BipartiteDecomposition::hash() const
{
    Fnv1a h;
    h.u64(stages.size());
    for (const auto& st : stages) {
        h.u64(st.graph.hash());
        h.str(st.partition.to_string());
    }
    return h.value();
}

std::optional<BipartitePartition> is_bipartite(const Graph& g)
{
    const int n = g.n();
    std::vector<int> color(static_cast<size_t>(n), -1);
    const auto& A = g.adjacency();
    std::queue<int> q;
    for (int s = 0; s < n; ++s) {
        if (color[static_cast<size_t>(s)] >= 0)
            continue;
        color[static_cast<size_t>(s)] = 0;
        q.push(s);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (SparseRow::InnerIterator it(A, u); it; ++it) {
                auto v = static_cast<size_t>(it.col());
                if (color[v] < 0) {
                    color[v] = 1 - color[static_cast<size_t>(u)];
                    q.push(static_cast<int>(v));
                } else if (color[v] == color[static_cast<size_t>(u)]) {
                    return std::nullopt;
                }
            }
        }
    }
    BipartitePartition p;
    p.side.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        p.side[static_cast<size_t>(i)] = color[static_cast<size_t>(i)] ? Side::H : Side::L;
    return p;
}

std::vector<int> greedy_coloring(const Graph& g, ColoringOrder order)
{
    const int n = g.n();
    const auto& A = g.adjacency();
    std::vector<int> ord(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        ord[static_cast<size_t>(i)] = i;
    if (order == ColoringOrder::degree_desc) {
        // breadth-first from the highest-degree unvisited node, neighbours by
        // descending degree; bipartite components then get two colors
        auto deg = [&A](int v) { return A.innerVector(v).nonZeros(); };
        auto by_deg = [&deg](int a, int b) { return deg(a) > deg(b) || (deg(a) == deg(b) && a < b); };
        std::vector<int> roots = ord;
        std::stable_sort(roots.begin(), roots.end(), by_deg);
        std::vector<bool> seen(static_cast<size_t>(n), false);
        ord.clear();
        std::vector<int> nb;
        for (int r : roots) {
            if (seen[static_cast<size_t>(r)])
                continue;
            seen[static_cast<size_t>(r)] = true;
            size_t head = ord.size();
            ord.push_back(r);
            while (head < ord.size()) {
                const int u = ord[head++];
                nb.clear();
                for (SparseRow::InnerIterator it(A, u); it; ++it)
                    if (!seen[static_cast<size_t>(it.col())])
                        nb.push_back(static_cast<int>(it.col()));
                std::sort(nb.begin(), nb.end(), by_deg);
                for (int v : nb) {
                    seen[static_cast<size_t>(v)] = true;
                    ord.push_back(v);
                }
            }
        }
    }
    std::vector<int> color(static_cast<size_t>(n), -1);
    std::vector<int> seen(static_cast<size_t>(n) + 1, -1);
    for (int u : ord) {
        for (SparseRow::InnerIterator it(A, u); it; ++it) {
            int c = color[static_cast<size_t>(it.col())];
            if (c >= 0)
                seen[static_cast<size_t>(c)] = u;
        }
        int c = 0;
        while (seen[static_cast<size_t>(c)] == u)
            ++c;
        color[static_cast<size_t>(u)] = c;
    }
    return color;
}

int color_count(const std::vector<int>& colors)
{
    int m = -1;
    for (int c : colors)
        m = std::max(m, c);
    return m + 1;
}

BipartiteDecomposition harary_decompose(const Graph& g, const std::vector<int>& colors)
{
    const int n = g.n();
    if (static_cast<int>(colors.size()) != n)
        throw ValidationError("coloring length does not match graph");
    for (int c : colors)
        if (c < 0)
            throw ValidationError("negative color index");
    for (const auto& e : g.edges())
        if (colors[static_cast<size_t>(e.u)] == colors[static_cast<size_t>(e.v)])
            throw ValidationError("monochromatic edge " + std::to_string(e.u) + " " +
                                  std::to_string(e.v));
    const int K = std::max(1, color_count(colors));
    int S = 0;
    while ((1 << S) < K)
        ++S;
    S = std::max(S, 1);

    BipartiteDecomposition d;
    d.coverage.assign(g.num_edges(), -1);
    std::vector<std::vector<Edge>> stage_edges(static_cast<size_t>(S));
    for (size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edges()[k];
        int diff = colors[static_cast<size_t>(e.u)] ^ colors[static_cast<size_t>(e.v)];
        int t = 0;
        while (!((diff >> t) & 1))
            ++t;
        stage_edges[static_cast<size_t>(t)].push_back(e);
        d.coverage[k] = t;
    }
    for (int t = 0; t < S; ++t) {
        Stage st{Graph(n, std::move(stage_edges[static_cast<size_t>(t)])), {}};
        st.partition.side.resize(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v)
            st.partition.side[static_cast<size_t>(v)] =
                ((colors[static_cast<size_t>(v)] >> t) & 1) ? Side::H : Side::L;
        d.stages.push_back(std::move(st));
    }
    settle_isolated(d);
    return d;
}

BipartiteDecomposition single_stage(const Graph& g, const BipartitePartition& part)
{
    if (!partition_valid(g, part))
        throw ValidationError("edge within one side");
    BipartiteDecomposition d;
    d.stages.push_back({g, part});
    d.coverage.assign(g.num_edges(), 0);
    return d;
}

BipartiteDecomposition auto_decompose(const Graph& g)
{
    if (auto p = is_bipartite(g))
        return single_stage(g, *p);
    return harary_decompose(g, greedy_coloring(g, ColoringOrder::degree_desc));
}

void validate_decomposition(const Graph& g, const BipartiteDecomposition& d)
{
    const int n = g.n();
    if (d.stages.empty())
        throw ValidationError("decomposition has no stages");
    if (d.coverage.size() != g.num_edges())
        throw ValidationError("decomposition coverage does not match the graph");
    auto lookup = edge_lookup(g);
    std::unordered_map<std::uint64_t, int> owner;
    for (size_t t = 0; t < d.stages.size(); ++t) {
        const auto& st = d.stages[t];
        if (st.graph.n() != n)
            throw ValidationError("stage " + std::to_string(t) + " does not span the vertex set");
        if (!partition_valid(st.graph, st.partition))
            throw ValidationError("edge within one side in stage " + std::to_string(t));
        for (const auto& e : st.graph.edges()) {
            auto key = pair_key(e.u, e.v);
            auto it = lookup.find(key);
            if (it == lookup.end() || it->second != e.w)
                throw ValidationError("stage " + std::to_string(t) + " edge " +
                                      std::to_string(e.u) + " " + std::to_string(e.v) +
                                      " is not a graph edge");
            if (!owner.emplace(key, static_cast<int>(t)).second)
                throw ValidationError("stages share edge " + std::to_string(e.u) + " " +
                                      std::to_string(e.v));
            for (size_t s = 0; s < t; ++s) {
                const auto& sd = d.stages[s].partition.side;
                if (sd[static_cast<size_t>(e.u)] != sd[static_cast<size_t>(e.v)])
                    throw ValidationError("stage " + std::to_string(t) + " edge " +
                                          std::to_string(e.u) + " " + std::to_string(e.v) +
                                          " crosses the stage " + std::to_string(s) +
                                          " partition");
            }
        }
    }
    for (size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edges()[k];
        auto it = owner.find(pair_key(e.u, e.v));
        int s = it == owner.end() ? -1 : it->second;
        if (s != d.coverage[k])
            throw ValidationError("decomposition coverage is inconsistent");
    }
}

std::string decomposition_to_string(const BipartiteDecomposition& d)
{
    std::string out = "stages " + std::to_string(d.stages.size()) + "\n";
    for (size_t t = 0; t < d.stages.size(); ++t) {
        out += "stage " + std::to_string(t) + "\n";
        out += d.stages[t].partition.to_string() + "\n";
        out += graph_to_string(d.stages[t].graph);
    }
    return out;
}

BipartiteDecomposition parse_decomposition(const Graph& g, const std::string& text,
                                           const std::string& source)
{
    std::istringstream is(text);
    std::string word;
    size_t S = 0;
    if (!(is >> word >> S) || word != "stages")
        throw ValidationError(source + ": expected 'stages S'");
    BipartiteDecomposition d;
    std::string rest((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    std::istringstream rs(rest);
    for (size_t t = 0; t < S; ++t) {
        size_t idx = 0;
        if (!(rs >> word >> idx) || word != "stage" || idx != t)
            throw ValidationError(source + ": expected 'stage " + std::to_string(t) + "'");
        std::string sides;
        rs >> sides;
        long long n = 0, m = 0;
        if (!(rs >> n >> m))
            throw ValidationError(source + ": expected stage graph header");
        std::string body = std::to_string(n) + " " + std::to_string(m) + "\n";
        for (long long k = 0; k < m; ++k) {
            std::string u, v, w;
            if (!(rs >> u >> v >> w))
                throw ValidationError(source + ": truncated stage edge list");
            body += u + " " + v + " " + w + "\n";
        }
        Stage st{parse_graph(body, source), BipartitePartition::from_string(sides)};
        d.stages.push_back(std::move(st));
    }
    std::unordered_map<std::uint64_t, int> owner;
    for (size_t t = 0; t < d.stages.size(); ++t)
        for (const auto& e : d.stages[t].graph.edges())
            owner.emplace(pair_key(e.u, e.v), static_cast<int>(t));
    d.coverage.assign(g.num_edges(), -1);
    for (size_t k = 0; k < g.num_edges(); ++k) {
        auto it = owner.find(pair_key(g.edges()[k].u, g.edges()[k].v));
        if (it != owner.end())
            d.coverage[k] = it->second;
    }
    validate_decomposition(g, d);
    return d;
}

bool LinkMask::contains(int a, int b) const
{
    if (a > b)
        std::swap(a, b);
    return std::binary_search(links.begin(), links.end(), std::make_pair(a, b));
}

void LinkMask::add(int a, int b)
{
    if (a > b)
        std::swap(a, b);
    links.emplace_back(a, b);
}

void LinkMask::finalize()
{
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
}

BipartiteDecomposition decompose_lattice(const Graph& g, LatticeShape shape)
{
    const int n = g.n();
    if (n != shape.width * shape.height)
        throw ValidationError("lattice shape does not match graph size");
    std::vector<Edge> rect, diag;
    BipartiteDecomposition d;
    d.coverage.resize(g.num_edges());
    for (size_t k = 0; k < g.num_edges(); ++k) {
        const auto& e = g.edges()[k];
        int r0 = e.u / shape.width, c0 = e.u % shape.width;
        int r1 = e.v / shape.width, c1 = e.v % shape.width;
        int dr = std::abs(r1 - r0), dc = std::abs(c1 - c0);
        if (dr + dc == 1) {
            rect.push_back(e);
            d.coverage[k] = 0;
        } else if (dr == 1 && dc == 1) {
            diag.push_back(e);
            d.coverage[k] = 1;
        } else {
            throw ValidationError("edge is not a lattice link");
        }
    }
    Stage s1{Graph(n, std::move(rect)), {}}, s2{Graph(n, std::move(diag)), {}};
    s1.partition.side.resize(static_cast<size_t>(n));
    s2.partition.side.resize(static_cast<size_t>(n));
    for (int r = 0; r < shape.height; ++r)
        for (int c = 0; c < shape.width; ++c) {
            auto i = static_cast<size_t>(shape.index(r, c));
            s1.partition.side[i] = ((r + c) % 2 == 0) ? Side::L : Side::H;
            s2.partition.side[i] = (r % 2 == 0) ? Side::L : Side::H;
        }
    d.stages.push_back(std::move(s1));
    d.stages.push_back(std::move(s2));
    return d;
}

ImageGraph image_graph(const ImageGraphSpec& spec)
{
    if (spec.width < 2 || spec.height < 2)
        throw ValidationError("image must be at least 2x2");
    if (spec.connectivity != 8)
        throw ValidationError("only 8-connected image graphs are supported");
    LatticeShape shape{spec.width, spec.height};
    if (spec.mask && !(spec.mask->shape == shape))
        throw ValidationError("link mask shape does not match image");
    std::vector<Edge> edges;
    auto link = [&](int a, int b) {
        if (!spec.mask || !spec.mask->contains(a, b))
            edges.push_back({a, b, 1.0});
    };
    for (int r = 0; r < shape.height; ++r)
        for (int c = 0; c < shape.width; ++c) {
            int a = shape.index(r, c);
            if (c + 1 < shape.width)
                link(a, shape.index(r, c + 1));
            if (r + 1 < shape.height) {
                link(a, shape.index(r + 1, c));
                if (c + 1 < shape.width)
                    link(a, shape.index(r + 1, c + 1));
                if (c > 0)
                    link(a, shape.index(r + 1, c - 1));
            }
        }
    ImageGraph ig{Graph(shape.width * shape.height, std::move(edges)), {}, shape};
    ig.decomposition = decompose_lattice(ig.graph, shape);
    return ig;
}

CoarsenResult coarsen_two_hop(const Graph& g, const std::vector<int>& keep)
{
    if (keep.empty())
        throw ValidationError("coarsening needs a nonempty keep set");
    const int n = g.n();
    CoarsenResult res;
    res.kept = keep;
    std::sort(res.kept.begin(), res.kept.end());
    res.kept.erase(std::unique(res.kept.begin(), res.kept.end()), res.kept.end());
    std::vector<int> map(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < res.kept.size(); ++i) {
        int v = res.kept[i];
        if (v < 0 || v >= n)
            throw ValidationError("keep index out of range");
        map[static_cast<size_t>(v)] = static_cast<int>(i);
    }
    const auto& A = g.adjacency();
    const auto& deg = g.degree();
    std::map<std::pair<int, int>, double> w;
    for (int u : res.kept) {
        const int cu = map[static_cast<size_t>(u)];
        for (SparseRow::InnerIterator it(A, u); it; ++it) {
            const int k = static_cast<int>(it.col());
            const int ck = map[static_cast<size_t>(k)];
            if (ck >= 0) {
                if (cu < ck)
                    w[{cu, ck}] += it.value();
                continue;
            }
            for (SparseRow::InnerIterator jt(A, k); jt; ++jt) {
                const int cv = map[static_cast<size_t>(jt.col())];
                if (cv > cu)
                    w[{cu, cv}] += it.value() * jt.value() / deg[static_cast<size_t>(k)];
            }
        }
    }
    std::vector<Edge> edges;
    edges.reserve(w.size());
    for (const auto& [key, val] : w)
        edges.push_back({key.first, key.second, val});
    res.graph = Graph(static_cast<int>(res.kept.size()), std::move(edges));
    for (int i = 0; i < res.graph.n(); ++i)
        if (res.graph.degree()[static_cast<size_t>(i)] == 0.0)
            res.isolated.push_back(i);
    return res;
}

CoarsenResult coarsen_lattice8(const Graph& g, LatticeShape shape)
{
    if (g.n() != shape.width * shape.height)
        throw ValidationError("lattice shape does not match graph size");
    auto lookup = edge_lookup(g);
    auto has = [&](int a, int b) { return lookup.count(pair_key(a, b)) > 0; };
    CoarsenResult res;
    res.shape = {(shape.width + 1) / 2, (shape.height + 1) / 2};
    for (int R = 0; R < res.shape.height; ++R)
        for (int C = 0; C < res.shape.width; ++C)
            res.kept.push_back(shape.index(2 * R, 2 * C));
    std::vector<Edge> edges;
    const int offs[4][2] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}};
    for (int R = 0; R < res.shape.height; ++R)
        for (int C = 0; C < res.shape.width; ++C)
            for (const auto& o : offs) {
                const int R2 = R + o[0], C2 = C + o[1];
                if (R2 >= res.shape.height || C2 < 0 || C2 >= res.shape.width)
                    continue;
                const int a = shape.index(2 * R, 2 * C);
                const int b = shape.index(2 * R2, 2 * C2);
                const int m = shape.index(2 * R + o[0], 2 * C + o[1]);
                if (has(a, m) && has(m, b))
                    edges.push_back({res.shape.index(R, C), res.shape.index(R2, C2), 1.0});
            }
    res.graph = Graph(res.shape.width * res.shape.height, std::move(edges));
    for (int i = 0; i < res.graph.n(); ++i)
        if (res.graph.degree()[static_cast<size_t>(i)] == 0.0)
            res.isolated.push_back(i);
    return res;
}

CoarsenResult coarsen(const Graph& g, const std::vector<int>& keep, CoarsenScheme scheme,
                      const LatticeShape* shape)
{
    if (scheme == CoarsenScheme::two_hop)
        return coarsen_two_hop(g, keep);
    if (!shape)
        throw ValidationError("lattice8 coarsening needs the lattice shape");
    auto res = coarsen_lattice8(g, *shape);
    std::vector<int> k = keep;
    std::sort(k.begin(), k.end());
    if (k != res.kept)
        throw ValidationError("lattice8 coarsening keeps exactly the even-row, even-column pixels");
    return res;
}

} // namespace graphbior
