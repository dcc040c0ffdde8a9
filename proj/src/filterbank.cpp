#include "graphbior/filterbank.hpp"
#include "graphbior/error.hpp"
#include "graphbior/io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphbior {

namespace {

LaplacianKind kind_for(Variant v)
{
    return v == Variant::zero_dc ? LaplacianKind::random_walk : LaplacianKind::symmetric_normalized;
}

struct ChannelSignal {
    std::string bits;
    Signal s;
};

std::vector<int> cell_nodes(const BipartiteDecomposition& d, const std::string& bits, int n)
{
    std::vector<int> out;
    for (int v = 0; v < n; ++v) {
        bool in = true;
        for (size_t t = 0; t < bits.size() && in; ++t) {
            Side want = bits[t] == 'L' ? Side::L : Side::H;
            in = d.stages[t].partition.side[static_cast<size_t>(v)] == want;
        }
        if (in)
            out.push_back(v);
    }
    return out;
}

double channel_gain(const KernelSet& ks, const std::string& bits)
{
    double g = 1.0;
    for (char b : bits)
        g *= b == 'L' ? ks.gain_low : ks.gain_high;
    return g;
}

std::vector<ChannelCoefficients> cascade_analyze(const Graph& g, const BipartiteDecomposition& d,
                                                 const KernelSet& ks, const Signal& f,
                                                 Variant variant, bool gc, size_t& passthrough)
{
    std::vector<ChannelSignal> cur{{"", f}};
    for (const auto& st : d.stages) {
        for (int v = 0; v < st.graph.n(); ++v)
            if (st.graph.degree()[static_cast<size_t>(v)] == 0.0)
                ++passthrough;
        std::vector<ChannelSignal> next;
        next.reserve(cur.size() * 2);
        for (const auto& cs : cur) {
            auto two = analyze_one(st.graph, st.partition, ks, cs.s, variant, gc);
            next.push_back({cs.bits + "L", std::move(two.low)});
            next.push_back({cs.bits + "H", std::move(two.high)});
        }
        cur = std::move(next);
    }
    std::vector<ChannelCoefficients> out;
    for (const auto& cs : cur) {
        ChannelCoefficients ch;
        ch.bits = cs.bits;
        ch.nodes = cell_nodes(d, cs.bits, g.n());
        ch.gain = channel_gain(ks, cs.bits);
        std::vector<bool> in(static_cast<size_t>(g.n()), false);
        for (int v : ch.nodes) {
            in[static_cast<size_t>(v)] = true;
            ch.values.push_back(cs.s[v]);
        }
        for (int v = 0; v < g.n(); ++v)
            if (!in[static_cast<size_t>(v)] && cs.s[v] != 0.0)
                throw NumericalError("channel " + cs.bits + " leaks outside its cell");
        out.push_back(std::move(ch));
    }
    return out;
}

Signal cascade_synthesize(const Graph& g, const BipartiteDecomposition& d, const KernelSet& ks,
                          const std::vector<const ChannelCoefficients*>& leaves, Variant variant,
                          bool gc)
{
    const int n = g.n();
    const size_t S = d.stages.size();
    std::vector<Signal> cur(leaves.size());
    for (size_t i = 0; i < leaves.size(); ++i) {
        cur[i] = Signal::Zero(n);
        const auto& ch = *leaves[i];
        if (ch.nodes.size() != ch.values.size())
            throw ValidationError("channel " + ch.bits + " has mismatched node/value counts");
        for (size_t k = 0; k < ch.nodes.size(); ++k)
            cur[i][ch.nodes[k]] = ch.values[k];
    }
    for (size_t t = S; t-- > 0;) {
        const auto& st = d.stages[t];
        std::vector<Signal> up(cur.size() / 2);
        for (size_t i = 0; i < up.size(); ++i)
            up[i] = synthesize_one(st.graph, st.partition, ks, cur[2 * i], cur[2 * i + 1], variant, gc);
        cur = std::move(up);
    }
    return cur.front();
}

std::vector<std::string> all_bits(size_t S)
{
    std::vector<std::string> out{""};
    for (size_t t = 0; t < S; ++t) {
        std::vector<std::string> next;
        for (const auto& b : out) {
            next.push_back(b + "L");
            next.push_back(b + "H");
        }
        out = std::move(next);
    }
    return out;
}

} // namespace

const char* variant_name(Variant v)
{
    return v == Variant::zero_dc ? "zerodc" : "nonzerodc";
}

Variant parse_variant(const std::string& s)
{
    if (s == "zerodc" || s == "zeroDC")
        return Variant::zero_dc;
    if (s == "nonzerodc" || s == "nonzeroDC")
        return Variant::nonzero_dc;
    throw ValidationError("unknown variant '" + s + "' (expected nonzerodc or zerodc)");
}

void validate_config(const FilterbankConfig& cfg)
{
    if (cfg.levels < 1)
        throw ValidationError("levels must be at least 1");
    auto rep = verify_kernelset(cfg.kernels);
    if (!rep.perfect_reconstruction(1e-8))
        throw ValidationError("kernels violate the perfect reconstruction conditions (deviation " +
                              format_double(std::max(rep.max_pr_deviation,
                                                     rep.max_alias_deviation)) +
                              ")");
    if (cfg.coarsening.scheme == CoarsenScheme::lattice8 && !cfg.coarsening.lattice)
        throw ValidationError("lattice8 coarsening needs the lattice shape");
}

TwoChannel analyze_one(const Graph& b, const BipartitePartition& part, const KernelSet& ks,
                       const Signal& f, Variant variant, bool gc)
{
    if (f.size() != b.n())
        throw ValidationError("signal length does not match graph");
    if (!partition_valid(b, part))
        throw ValidationError("edge within one side");
    KernelSet kc = ks;
    fill_centered(kc);
    LaplacianOperator op(b, kind_for(variant), true);
    TwoChannel out{spectral_filter_centered(op, kc.h0c, f), spectral_filter_centered(op, kc.h1c, f)};
    const auto& deg = b.degree();
    for (int v = 0; v < b.n(); ++v) {
        const bool low_side = part.side[static_cast<size_t>(v)] == Side::L;
        const bool isolated = deg[static_cast<size_t>(v)] == 0.0;
        if (low_side) {
            out.high[v] = 0.0;
            out.low[v] = isolated ? f[v] : (gc ? out.low[v] * ks.gain_low : out.low[v]);
        } else {
            out.low[v] = 0.0;
            out.high[v] = isolated ? f[v] : (gc ? out.high[v] * ks.gain_high : out.high[v]);
        }
    }
    return out;
}

Signal synthesize_one(const Graph& b, const BipartitePartition& part, const KernelSet& ks,
                      const Signal& low, const Signal& high, Variant variant, bool gc)
{
    if (low.size() != b.n() || high.size() != b.n())
        throw ValidationError("channel length does not match graph");
    if (!partition_valid(b, part))
        throw ValidationError("edge within one side");
    Signal lo = Signal::Zero(b.n()), hi = Signal::Zero(b.n());
    const auto& deg = b.degree();
    std::vector<std::pair<int, double>> passed;
    for (int v = 0; v < b.n(); ++v) {
        const bool low_side = part.side[static_cast<size_t>(v)] == Side::L;
        if (deg[static_cast<size_t>(v)] == 0.0) {
            passed.emplace_back(v, low_side ? low[v] : high[v]);
            continue;
        }
        if (low_side)
            lo[v] = gc ? low[v] / ks.gain_low : low[v];
        else
            hi[v] = gc ? high[v] / ks.gain_high : high[v];
    }
    KernelSet kc = ks;
    fill_centered(kc);
    LaplacianOperator op(b, kind_for(variant), true);
    Signal y = spectral_filter_centered(op, kc.g0c, lo) + spectral_filter_centered(op, kc.g1c, hi);
    for (const auto& [v, val] : passed)
        y[v] = val;
    return y;
}

size_t CoefficientTree::coefficient_count() const
{
    size_t n = 0;
    for (const auto& lv : levels)
        for (const auto& ch : lv.channels)
            n += ch.nodes.size();
    return n;
}

std::uint64_t config_hash(const Graph& g, const BipartiteDecomposition& d,
                          const FilterbankConfig& cfg)
{
    Fnv1a h;
    h.u64(g.hash());
    h.u64(d.hash());
    h.u64(kernel_hash(cfg.kernels));
    h.i64(static_cast<int>(cfg.variant));
    h.i64(cfg.gain_compensation ? 1 : 0);
    h.i64(cfg.levels);
    h.i64(static_cast<int>(cfg.coarsening.scheme));
    if (cfg.coarsening.lattice) {
        h.i64(cfg.coarsening.lattice->width);
        h.i64(cfg.coarsening.lattice->height);
    }
    return h.value();
}

CoefficientTree analyze(const Graph& g, const BipartiteDecomposition& decomp,
                        const FilterbankConfig& cfg, const Signal& f)
{
    validate_config(cfg);
    if (f.size() != g.n())
        throw ValidationError("signal length does not match graph");
    if (cfg.coarsening.lattice &&
        cfg.coarsening.lattice->width * cfg.coarsening.lattice->height != g.n())
        throw ValidationError("lattice shape does not match graph size");

    CoefficientTree tree;
    tree.variant = cfg.variant;
    tree.gain_compensation = cfg.gain_compensation;
    tree.k0 = cfg.kernels.k0;
    tree.k1 = cfg.kernels.k1;
    tree.graph_hash = g.hash();
    tree.kernel_hash = kernel_hash(cfg.kernels);
    tree.config_hash = config_hash(g, decomp, cfg);

    Graph cur = g;
    BipartiteDecomposition cur_d = decomp;
    std::optional<LatticeShape> lattice = cfg.coarsening.lattice;
    std::vector<int> ids(static_cast<size_t>(g.n()));
    std::iota(ids.begin(), ids.end(), 0);
    Signal cur_f = f;

    for (int lev = 0; lev < cfg.levels; ++lev) {
        validate_decomposition(cur, cur_d);
        LevelCoefficients lv;
        lv.channels = cascade_analyze(cur, cur_d, cfg.kernels, cur_f, cfg.variant,
                                      cfg.gain_compensation, lv.passthrough);
        size_t total = 0;
        for (const auto& ch : lv.channels)
            total += ch.nodes.size();
        if (total != static_cast<size_t>(cur.n()))
            throw NumericalError("critical sampling violated at level " + std::to_string(lev));

        lv.graph = cur;
        lv.decomposition = cur_d;
        lv.lattice = lattice;
        lv.node_ids = ids;
        const bool last = lev + 1 == cfg.levels;
        if (!last) {
            // channels[0] is the all-low cell
            ChannelCoefficients low = std::move(lv.channels.front());
            lv.channels.erase(lv.channels.begin());
            if (low.nodes.empty())
                throw ValidationError("no all-low nodes left for level " + std::to_string(lev + 1));
            auto coarse = coarsen(cur, low.nodes, cfg.coarsening.scheme,
                                  lattice ? &*lattice : nullptr);
            BipartiteDecomposition next_d = cfg.coarsening.scheme == CoarsenScheme::lattice8
                                                ? decompose_lattice(coarse.graph, coarse.shape)
                                                : auto_decompose(coarse.graph);
            std::vector<int> next_ids;
            for (int v : coarse.kept)
                next_ids.push_back(ids[static_cast<size_t>(v)]);
            cur_f = Eigen::Map<const Signal>(low.values.data(),
                                             static_cast<Eigen::Index>(low.values.size()));
            tree.levels.push_back(std::move(lv));
            cur = std::move(coarse.graph);
            cur_d = std::move(next_d);
            if (cfg.coarsening.scheme == CoarsenScheme::lattice8)
                lattice = coarse.shape;
            ids = std::move(next_ids);
        } else {
            tree.levels.push_back(std::move(lv));
        }
    }
    return tree;
}

Signal synthesize(const Graph& g, const BipartiteDecomposition& decomp,
                  const FilterbankConfig& cfg, const CoefficientTree& tree)
{
    if (tree.config_hash != config_hash(g, decomp, cfg) ||
        tree.levels.size() != static_cast<size_t>(cfg.levels))
        throw ValidationError("incompatible coefficient tree");

    Signal below;
    for (size_t lev = tree.levels.size(); lev-- > 0;) {
        const auto& lv = tree.levels[lev];
        const size_t S = lv.decomposition.stages.size();
        const bool last = lev + 1 == tree.levels.size();
        ChannelCoefficients low_from_below;
        std::vector<const ChannelCoefficients*> leaves;
        auto bits = all_bits(S);
        if (!last) {
            low_from_below.bits = bits.front();
            low_from_below.nodes = cell_nodes(lv.decomposition, bits.front(), lv.graph.n());
            if (static_cast<Eigen::Index>(low_from_below.nodes.size()) != below.size())
                throw ValidationError("incompatible coefficient tree");
            low_from_below.values.assign(below.data(), below.data() + below.size());
            leaves.push_back(&low_from_below);
        }
        for (const auto& ch : lv.channels)
            leaves.push_back(&ch);
        if (leaves.size() != bits.size())
            throw ValidationError("incompatible coefficient tree");
        for (size_t i = 0; i < bits.size(); ++i)
            if (leaves[i]->bits != bits[i])
                throw ValidationError("incompatible coefficient tree");
        below = cascade_synthesize(lv.graph, lv.decomposition, cfg.kernels, leaves, tree.variant,
                                   tree.gain_compensation);
    }
    return below;
}

size_t detail_count(const CoefficientTree& tree)
{
    size_t n = tree.coefficient_count();
    if (!tree.levels.empty() && !tree.levels.back().channels.empty())
        n -= tree.levels.back().channels.front().nodes.size();
    return n;
}

CoefficientTree sparsify(const CoefficientTree& tree, double keep_fraction)
{
    if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0))
        throw ValidationError("keep fraction must lie in [0, 1]");
    CoefficientTree out = tree;
    struct Ref {
        size_t level, channel, k;
        double mag;
    };
    std::vector<Ref> refs;
    for (size_t l = 0; l < out.levels.size(); ++l) {
        const bool last = l + 1 == out.levels.size();
        for (size_t c = 0; c < out.levels[l].channels.size(); ++c) {
            if (last && c == 0)
                continue; // deepest all-low cell is always kept
            const auto& ch = out.levels[l].channels[c];
            const double g = out.gain_compensation ? 1.0 : ch.gain;
            for (size_t k = 0; k < ch.values.size(); ++k)
                refs.push_back({l, c, k, std::fabs(ch.values[k] * g)});
        }
    }
    const auto keep = static_cast<size_t>(std::llround(keep_fraction * static_cast<double>(refs.size())));
    std::stable_sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) { return a.mag > b.mag; });
    for (size_t i = keep; i < refs.size(); ++i)
        out.levels[refs[i].level].channels[refs[i].channel].values[refs[i].k] = 0.0;
    return out;
}

std::string coefficient_dump(const CoefficientTree& tree)
{
    std::string out;
    out += "# graph_hash=" + hex64(tree.graph_hash) + "\n";
    out += "# kernels k0=" + std::to_string(tree.k0) + " k1=" + std::to_string(tree.k1) +
           " kernel_hash=" + hex64(tree.kernel_hash) + "\n";
    out += std::string("# variant=") + variant_name(tree.variant) +
           " gc=" + (tree.gain_compensation ? "1" : "0") +
           " levels=" + std::to_string(tree.levels.size()) + "\n";
    out += "# config_hash=" + hex64(tree.config_hash) + "\n";
    out += "level,channel_bits,node,value\n";
    for (size_t l = 0; l < tree.levels.size(); ++l) {
        const auto& lv = tree.levels[l];
        for (const auto& ch : lv.channels)
            for (size_t k = 0; k < ch.nodes.size(); ++k) {
                out += std::to_string(l) + "," + ch.bits + "," +
                       std::to_string(lv.node_ids[static_cast<size_t>(ch.nodes[k])]) + "," +
                       format_double(ch.values[k]) + "\n";
            }
    }
    return out;
}

TransferOperators transfer_operators(const Graph& b, const BipartitePartition& part,
                                     const KernelSet& ks, Basis basis)
{
    if (!partition_valid(b, part))
        throw ValidationError("edge within one side");
    KernelSet kc = ks;
    fill_centered(kc);
    const Eigen::MatrixXd H0 = dense_kernel_matrix_centered(b, kc.h0c, basis);
    const Eigen::MatrixXd H1 = dense_kernel_matrix_centered(b, kc.h1c, basis);
    const Eigen::MatrixXd G0 = dense_kernel_matrix_centered(b, kc.g0c, basis);
    const Eigen::MatrixXd G1 = dense_kernel_matrix_centered(b, kc.g1c, basis);
    Eigen::VectorXd J(b.n());
    auto beta = part.beta();
    for (int i = 0; i < b.n(); ++i)
        J[i] = beta[static_cast<size_t>(i)];
    TransferOperators t;
    t.T_eq = 0.5 * (G0 * H0 + G1 * H1);
    t.T_alias = 0.5 * (G0 * J.asDiagonal() * H0 - G1 * J.asDiagonal() * H1);
    return t;
}

Eigen::MatrixXd analysis_operator(const Graph& b, const BipartitePartition& part,
                                  const KernelSet& ks, Variant variant)
{
    if (!partition_valid(b, part))
        throw ValidationError("edge within one side");
    const Basis basis = variant == Variant::zero_dc ? Basis::random_walk : Basis::symmetric;
    KernelSet kc = ks;
    fill_centered(kc);
    const Eigen::MatrixXd H0 = dense_kernel_matrix_centered(b, kc.h0c, basis);
    const Eigen::MatrixXd H1 = dense_kernel_matrix_centered(b, kc.h1c, basis);
    Eigen::MatrixXd T(b.n(), b.n());
    for (int i = 0; i < b.n(); ++i)
        T.row(i) = part.side[static_cast<size_t>(i)] == Side::L ? H0.row(i) : H1.row(i);
    return T;
}

} // namespace graphbior
