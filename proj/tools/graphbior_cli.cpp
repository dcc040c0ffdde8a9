// graphbior command line front end.

#include "CLI11.hpp"
#include "json.hpp"

#include "graphbior/bipartite.hpp"
#include "graphbior/error.hpp"
#include "graphbior/experiments.hpp"
#include "graphbior/filterbank.hpp"
#include "graphbior/graph.hpp"
#include "graphbior/image.hpp"
#include "graphbior/io.hpp"
#include "graphbior/kernels.hpp"
#include "graphbior/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace graphbior;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr double kLowTheta = 0.8;

struct CliError : std::runtime_error {
    int code;
    CliError(int c, const std::string& m) : std::runtime_error(m), code(c) {}
};

// Run f, tagging any failure with the stage name and the input it was working on.
template <class F>
auto stage(const std::string& name, const std::string& input, F&& f) -> decltype(f())
{
    auto msg = [&](const char* what) {
        return "stage '" + name + "' (input: " + input + "): " + what;
    };
    try {
        return f();
    } catch (const CliError&) {
        throw;
    } catch (const NumericalError& e) {
        throw CliError(kExitNumerical, msg(e.what()));
    } catch (const std::exception& e) {
        throw CliError(kExitValidation, msg(e.what()));
    }
}

struct Options {
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string variant = "nonzerodc";
    bool gc = true;
    int levels = 1;
    double keep = 1.0;
    std::vector<double> edge_aware;
    std::string kernels = "6,6";
    std::string kernel_file;
};

std::pair<int, int> parse_pair(const std::string& s)
{
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos)
            throw std::invalid_argument(s);
        size_t p1 = 0, p2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        int k0 = std::stoi(a, &p1), k1 = std::stoi(b, &p2);
        if (p1 != a.size() || p2 != b.size())
            throw std::invalid_argument(s);
        return {k0, k1};
    } catch (const std::exception&) {
        throw ValidationError("expected k0,k1 but got '" + s + "'");
    }
}

// The JSON sidecar carries the kernels about lambda = 1 as well; re-expanding
// the lambda-basis rows loses accuracy once the degree is in the upper teens.
void apply_sidecar(KernelSet& ks, const fs::path& sidecar)
{
    const json j = json::parse(read_file(sidecar.string()));
    if (!j.contains("centered"))
        return;
    const auto& c = j.at("centered");
    KernelSet from_rows = ks;
    fill_centered(from_rows);
    std::pair<Polynomial*, const Polynomial*> rows[] = {
        {&ks.h0c, &from_rows.h0c}, {&ks.h1c, &from_rows.h1c},
        {&ks.g0c, &from_rows.g0c}, {&ks.g1c, &from_rows.g1c}};
    const char* names[] = {"h0", "h1", "g0", "g1"};
    for (int i = 0; i < 4; ++i) {
        Polynomial p(c.at(names[i]).get<std::vector<double>>());
        if (relative_coeff_distance(p, *rows[i].second) > 1e-6)
            throw ValidationError(sidecar.string() + ": centered " + names[i] +
                                  " does not match the csv row");
        *rows[i].first = p;
    }
    if (j.contains("k0") && j.contains("k1")) {
        ks.k0 = j.at("k0").get<int>();
        ks.k1 = j.at("k1").get<int>();
    }
}

KernelSet load_kernels(const Options& o)
{
    if (!o.kernel_file.empty())
        return stage("load-kernels", o.kernel_file, [&] {
            KernelSet ks = parse_kernels_csv(read_file(o.kernel_file), o.kernel_file);
            const fs::path sidecar = fs::path(o.kernel_file).replace_extension(".json");
            if (fs::exists(sidecar)) {
                try {
                    apply_sidecar(ks, sidecar);
                } catch (const json::exception& e) {
                    throw ValidationError(sidecar.string() + ": " + e.what());
                }
            }
            return ks;
        });
    return stage("design", "--kernels " + o.kernels, [&] {
        auto [k0, k1] = parse_pair(o.kernels);
        return design_kernels(k0, k1);
    });
}

void warn_theta(const KernelSet& ks)
{
    if (ks.theta < kLowTheta)
        std::cerr << "warning: graphBior(" << ks.k0 << "," << ks.k1
                  << ") has strongly dissimilar channel norms (theta " << ks.theta << " < "
                  << kLowTheta << ")\n";
}

fs::path out_path(const Options& o, const std::string& name)
{
    return fs::path(o.out_dir) / name;
}

void ensure_out_dir(const Options& o)
{
    stage("output", o.out_dir, [&] {
        fs::create_directories(o.out_dir);
        return 0;
    });
}

void write_out(const Options& o, const std::string& name, const std::string& content)
{
    const auto p = out_path(o, name);
    stage("write", p.string(), [&] {
        write_file_atomic(p, content);
        return 0;
    });
}

json kernels_json(const KernelSet& ks)
{
    json j;
    j["k0"] = ks.k0;
    j["k1"] = ks.k1;
    j["theta"] = ks.theta;
    j["gain_low"] = ks.gain_low;
    j["gain_high"] = ks.gain_high;
    j["centered"] = {{"h0", ks.h0c.coeffs()}, {"h1", ks.h1c.coeffs()},
                     {"g0", ks.g0c.coeffs()}, {"g1", ks.g1c.coeffs()}};
    return j;
}

std::string kernel_stem(const KernelSet& ks)
{
    return "kernels_" + std::to_string(ks.k0) + "_" + std::to_string(ks.k1);
}

// ---------------------------------------------------------------------------

int cmd_design(const Options& o, bool with_table2)
{
    KernelSet ks = load_kernels(o);
    const auto rep = stage("verify", "--kernels " + o.kernels, [&] { return verify_kernelset(ks); });
    ensure_out_dir(o);
    write_out(o, kernel_stem(ks) + ".csv", kernels_to_csv(ks));
    write_out(o, kernel_stem(ks) + ".json", kernels_json(ks).dump(2) + "\n");

    std::printf("graphBior(%d,%d) filter_length=%d\n", ks.k0, ks.k1, filter_length(ks));
    std::printf("theta=%.6f A=%.6f B=%.6f\n", rep.theta, rep.A, rep.B);
    std::printf("gain_low=%.6f gain_high=%.6f\n", ks.gain_low, ks.gain_high);
    std::printf("pr_deviation=%.3e alias_deviation=%.3e\n", rep.max_pr_deviation,
                rep.max_alias_deviation);
    warn_theta(ks);

    if (with_table2) {
        const Table2Row* row = find_table2(ks.k0, ks.k1);
        if (!row)
            throw CliError(kExitValidation, "stage 'table2' (input: --kernels " + o.kernels +
                                                "): no published row for graphBior(" +
                                                std::to_string(ks.k0) + "," +
                                                std::to_string(ks.k1) + ")");
        auto c = stage("table2", "--kernels " + o.kernels, [&] { return compare_table2(*row, ks); });
        std::printf("table2 h1_root_distance=%.3e rounded_root_distance=%.3e\n",
                    c.h1_root_distance, c.rounded_root_distance);
        std::printf("table2 h0_coeff_distance=%.3e h1_coeff_distance=%.3e\n", c.h0_coeff_distance,
                    c.h1_coeff_distance);
        std::printf("table2 product_distance=%.3e product_zero_distance=%.3e\n",
                    c.product_distance, c.product_zero_distance);
    }
    if (!rep.perfect_reconstruction(1e-8))
        throw CliError(kExitNumerical, "stage 'verify' (input: --kernels " + o.kernels +
                                           "): kernels are not perfect reconstruction");
    return 0;
}

int cmd_random_bipartite(const Options& o, int n_per_side, double p)
{
    auto rb = stage("generate", "random-bipartite n=" + std::to_string(n_per_side), [&] {
        return random_bipartite(n_per_side, o.seed, p);
    });
    ensure_out_dir(o);
    write_out(o, "graph.txt", graph_to_string(rb.graph));
    write_out(o, "partition.txt",
              decomposition_to_string(single_stage(rb.graph, rb.partition)));
    std::printf("nodes=%d edges=%zu removed_isolated=%d graph_hash=%s\n", rb.graph.n(),
                rb.graph.num_edges(), rb.removed, hex64(rb.graph.hash()).c_str());
    return 0;
}

struct Sources {
    std::string graph, signal, decomposition, image, edge_map;
    int random_bipartite = 0;
    int planar = 0;
    int disk_scene = 0;
};

Signal random_signal(int n, std::uint64_t seed)
{
    Rng rng(seed, 10);
    Signal f(n);
    for (int i = 0; i < n; ++i)
        f[i] = rng.normal();
    return f;
}

FilterbankConfig make_config(const Options& o, const KernelSet& ks)
{
    FilterbankConfig cfg;
    cfg.kernels = ks;
    cfg.variant = stage("config", "--variant " + o.variant, [&] { return parse_variant(o.variant); });
    cfg.gain_compensation = o.gc;
    cfg.levels = o.levels;
    if (o.keep < 0.0 || o.keep > 1.0)
        throw CliError(kExitValidation, "stage 'config' (input: --keep): keep fraction must lie in [0, 1]");
    return cfg;
}

int cmd_transform(const Options& o, const Sources& src, bool edge_aware)
{
    const int chosen = !src.graph.empty() + (src.random_bipartite > 0) + (src.planar > 0) +
                       !src.image.empty() + (src.disk_scene > 0);
    if (chosen != 1)
        throw CliError(kExitValidation, "stage 'ingest' (input: command line): choose exactly one of "
                                        "--graph, --random-bipartite, --planar, --image, --disk-scene");
    KernelSet ks = load_kernels(o);
    warn_theta(ks);
    FilterbankConfig cfg = make_config(o, ks);
    stage("config", "--kernels " + o.kernels, [&] {
        validate_config(cfg);
        return 0;
    });
    ensure_out_dir(o);

    json report;
    report["kernels"] = kernels_json(ks);
    report["variant"] = variant_name(cfg.variant);
    report["gc"] = cfg.gain_compensation;
    report["levels"] = cfg.levels;
    report["keep"] = o.keep;
    report["seed"] = o.seed;

    auto finish = [&](const TransformResult& res, const BipartiteDecomposition& d,
                      const Graph& g) {
        write_out(o, "coefficients.csv", coefficient_dump(res.kept));
        write_out(o, "decomposition.txt", decomposition_to_string(d));
        report["nodes"] = g.n();
        report["edges"] = g.num_edges();
        report["graph_hash"] = hex64(g.hash());
        report["decomposition_hash"] = hex64(d.hash());
        report["stages"] = d.stages.size();
        report["dropped_links"] = d.dropped();
        report["coefficients"] = res.coefficient_count;
        report["detail_coefficients"] = detail_count(res.tree);
        report["large_details"] = res.large_details;
        report["config_hash"] = hex64(res.tree.config_hash);
        size_t passthrough = 0;
        for (const auto& lv : res.tree.levels)
            passthrough += lv.passthrough;
        report["passthrough"] = passthrough;
        report["snr_db"] = res.snr;
        if (d.dropped() > 0)
            std::cerr << "warning: " << d.dropped()
                      << " links are not covered by the decomposition\n";
    };

    if (!src.image.empty() || src.disk_scene > 0) {
        const std::string input = src.image.empty() ? "disk-scene" : src.image;
        Image img = stage("ingest", input, [&] {
            return src.image.empty() ? disk_scene(src.disk_scene) : read_pgm(src.image);
        });
        std::optional<LinkMask> mask;
        if (edge_aware) {
            const double thr = o.edge_aware.size() > 0 ? o.edge_aware[0] : 30.0;
            const int minc = o.edge_aware.size() > 1 ? static_cast<int>(o.edge_aware[1]) : 50;
            std::vector<bool> edges;
            if (!src.edge_map.empty()) {
                Image em = stage("ingest", src.edge_map, [&] { return read_pgm(src.edge_map); });
                if (em.width != img.width || em.height != img.height)
                    throw CliError(kExitValidation, "stage 'edges' (input: " + src.edge_map +
                                                        "): edge map size does not match image");
                edges = edges_from_map(em);
            } else {
                edges = stage("edges", input, [&] { return detect_edges(img, thr, minc); });
            }
            mask = stage("edges", input, [&] { return mask_from_edges(img, edges); });
            Image em = img;
            em.maxval = 255;
            for (size_t i = 0; i < edges.size(); ++i)
                em.pixels[i] = edges[i] ? 0.0 : 255.0;
            write_out(o, "edges.pgm", pgm_to_string(em, true));
            report["edge_threshold"] = thr;
            report["edge_min_component"] = minc;
        }
        auto it = stage("transform", input, [&] { return run_image_transform(img, cfg, o.keep, mask); });
        finish(it.result, it.graph.decomposition, it.graph.graph);
        Image rec = img;
        for (size_t i = 0; i < rec.pixels.size(); ++i)
            rec.pixels[i] = it.result.reconstruction[static_cast<Eigen::Index>(i)];
        write_out(o, "reconstruction.pgm", pgm_to_string(rec, true));
        report["masked_links"] = it.masked_links;
        report["psnr_db"] = it.psnr;
        std::printf("psnr_db=%.4f snr_db=%.4f coefficients=%zu\n", it.psnr, it.result.snr,
                    it.result.coefficient_count);
    } else {
        Graph g;
        Signal f;
        BipartiteDecomposition d;
        std::string input;
        if (!src.graph.empty()) {
            input = src.graph;
            g = stage("ingest", input, [&] { return read_graph(src.graph); });
            if (!src.signal.empty()) {
                auto v = stage("ingest", src.signal, [&] { return read_signal(src.signal); });
                if (static_cast<int>(v.size()) != g.n())
                    throw CliError(kExitValidation,
                                   "stage 'ingest' (input: " + src.signal + "): signal has " +
                                       std::to_string(v.size()) + " values for " +
                                       std::to_string(g.n()) + " nodes");
                f = Eigen::Map<Signal>(v.data(), static_cast<Eigen::Index>(v.size()));
            } else {
                f = random_signal(g.n(), o.seed);
            }
            if (!src.decomposition.empty())
                d = stage("decompose", src.decomposition, [&] {
                    return parse_decomposition(g, read_file(src.decomposition), src.decomposition);
                });
            else
                d = stage("decompose", input, [&] { return auto_decompose(g); });
        } else if (src.random_bipartite > 0) {
            input = "random-bipartite n=" + std::to_string(src.random_bipartite);
            auto rb = stage("ingest", input, [&] { return random_bipartite(src.random_bipartite, o.seed); });
            g = rb.graph;
            f = random_signal(g.n(), o.seed);
            d = stage("decompose", input, [&] { return single_stage(g, rb.partition); });
        } else {
            input = "planar n=" + std::to_string(src.planar);
            auto pg = stage("ingest", input, [&] { return synthetic_planar(src.planar, o.seed); });
            g = pg.graph;
            f = piecewise_constant_signal(pg);
            d = stage("decompose", input, [&] { return harary_decompose(g, pg.colors); });
        }
        stage("decompose", input, [&] {
            validate_decomposition(g, d);
            return 0;
        });
        auto res = stage("transform", input, [&] { return run_transform(g, d, cfg, f, o.keep); });
        finish(res, d, g);
        write_out(o, "reconstruction.txt",
                  signal_to_string(std::vector<double>(res.reconstruction.data(),
                                                       res.reconstruction.data() +
                                                           res.reconstruction.size())));
        std::printf("snr_db=%.4f coefficients=%zu nodes=%d\n", res.snr, res.coefficient_count,
                    g.n());
    }
    write_out(o, "report.json", report.dump(2) + "\n");
    return 0;
}

int cmd_sweep_spreads(const Options& o, const std::vector<std::string>& designs, int ensemble,
                      int n_per_side, bool ideal)
{
    if (ensemble < 1)
        throw CliError(kExitValidation, "stage 'config' (input: --ensemble): need at least one graph");
    if (2 * n_per_side > 1000)
        throw CliError(kExitValidation, "stage 'config' (input: --n): sweeps are limited to 1000 nodes");
    std::vector<KernelSet> sets;
    for (const auto& d : designs)
        sets.push_back(stage("design", d, [&] {
            auto [k0, k1] = parse_pair(d);
            return design_kernels(k0, k1);
        }));
    // running sums per design and channel
    std::vector<std::array<double, 8>> acc(sets.size(), std::array<double, 8>{});
    double ideal_sp = 0, ideal_sc = 0;
    for (int m = 0; m < ensemble; ++m) {
        const std::string input = "random-bipartite n=" + std::to_string(n_per_side) +
                                  " member " + std::to_string(m);
        auto rb = stage("generate", input, [&] {
            return random_bipartite(n_per_side, o.seed + static_cast<std::uint64_t>(m));
        });
        stage("spreads", input, [&] {
            const auto dist = distance_matrix(rb.graph);
            const auto sd = eig(rb.graph);
            for (size_t k = 0; k < sets.size(); ++k) {
                const Polynomial* ch[4] = {&sets[k].h0, &sets[k].h1, &sets[k].g0, &sets[k].g1};
                for (int c = 0; c < 4; ++c) {
                    const auto R = kernel_responses(rb.graph, *ch[c]);
                    acc[k][2 * c] += spatial_spread_tx(dist, R);
                    acc[k][2 * c + 1] += spectral_spread_tx(sd, R);
                }
            }
            if (ideal) {
                const auto R = ideal_halfband_responses(sd);
                ideal_sp += spatial_spread_tx(dist, R);
                ideal_sc += spectral_spread_tx(sd, R);
            }
            return 0;
        });
    }
    ensure_out_dir(o);
    std::string csv = "design,channel,filter_length,spatial,spectral\n";
    const char* names[4] = {"h0", "h1", "g0", "g1"};
    for (size_t k = 0; k < sets.size(); ++k) {
        const std::string design =
            "\"graphBior(" + std::to_string(sets[k].k0) + "," + std::to_string(sets[k].k1) + ")\"";
        for (int c = 0; c < 4; ++c)
            csv += design + "," + names[c] + "," + std::to_string(filter_length(sets[k])) + "," +
                   format_double(acc[k][2 * c] / ensemble) + "," +
                   format_double(acc[k][2 * c + 1] / ensemble) + "\n";
    }
    if (ideal)
        csv += "ideal,h0,inf," + format_double(ideal_sp / ensemble) + "," +
               format_double(ideal_sc / ensemble) + "\n";
    write_out(o, "spreads.csv", csv);
    std::fputs(csv.c_str(), stdout);
    return 0;
}

int cmd_spectrum(const Options& o, int points)
{
    if (points < 2)
        throw CliError(kExitValidation, "stage 'config' (input: --points): need at least 2 points");
    KernelSet ks = load_kernels(o);
    fill_centered(ks);
    std::string csv = "lambda,h0,h1,C,D,pr_check\n";
    for (int i = 0; i < points; ++i) {
        const double l = 2.0 * i / (points - 1), x = l - 1.0, xm = 1.0 - l;
        const long double h0 = eval_ld(ks.h0c, x), h1 = eval_ld(ks.h1c, x);
        const long double g0 = eval_ld(ks.g0c, x), g1 = eval_ld(ks.g1c, x);
        const long double h0m = eval_ld(ks.h0c, xm), h1m = eval_ld(ks.h1c, xm);
        const double C = static_cast<double>(h0 * h0 + h1 * h1);
        const double D = static_cast<double>(h1 * h1m - h0 * h0m);
        const double pr = static_cast<double>(g0 * h0 + g1 * h1 - 2.0L);
        csv += format_double(l) + "," + format_double(static_cast<double>(h0)) + "," +
               format_double(static_cast<double>(h1)) + "," + format_double(C) + "," +
               format_double(D) + "," + format_double(pr) + "\n";
    }
    ensure_out_dir(o);
    write_out(o, "spectrum_" + std::to_string(ks.k0) + "_" + std::to_string(ks.k1) + ".csv", csv);
    return 0;
}

int cmd_verify(const Options& o, const std::string& graph_file, const std::string& decomp_file)
{
    KernelSet ks = load_kernels(o);
    const std::string kin = o.kernel_file.empty() ? "--kernels " + o.kernels : o.kernel_file;
    auto rep = stage("verify", kin, [&] { return verify_kernelset(ks); });
    std::printf("pr_deviation=%.3e alias_deviation=%.3e halfband_deviation=%.3e\n",
                rep.max_pr_deviation, rep.max_alias_deviation, rep.max_halfband_deviation);
    std::printf("mirror_h1=%.3e mirror_g1=%.3e theta=%.6f\n", rep.mirror_h1_deviation,
                rep.mirror_g1_deviation, rep.theta);
    if (!rep.perfect_reconstruction(1e-8))
        throw CliError(kExitNumerical, "stage 'verify' (input: " + kin +
                                           "): perfect reconstruction violated");
    if (graph_file.empty())
        return 0;

    Graph g = stage("ingest", graph_file, [&] { return read_graph(graph_file); });
    BipartiteDecomposition d =
        decomp_file.empty()
            ? stage("decompose", graph_file, [&] { return auto_decompose(g); })
            : stage("decompose", decomp_file, [&] {
                  return parse_decomposition(g, read_file(decomp_file), decomp_file);
              });
    const Signal f = random_signal(g.n(), o.seed);
    for (Variant v : {Variant::nonzero_dc, Variant::zero_dc}) {
        FilterbankConfig cfg;
        cfg.kernels = ks;
        cfg.variant = v;
        cfg.gain_compensation = o.gc;
        cfg.levels = o.levels;
        auto res = stage("round-trip", graph_file, [&] { return run_transform(g, d, cfg, f, 1.0); });
        std::printf("%s round_trip_snr_db=%.2f coefficients=%zu nodes=%d\n", variant_name(v),
                    res.snr, res.coefficient_count, g.n());
        if (res.snr < 100.0)
            throw CliError(kExitNumerical, "stage 'round-trip' (input: " + graph_file +
                                               "): SNR below 100 dB for " + variant_name(v));
    }
    return 0;
}

void add_kernel_options(CLI::App* sc, Options& o)
{
    sc->add_option("--kernels", o.kernels, "design as k0,k1")->capture_default_str();
    sc->add_option("--kernel-file", o.kernel_file, "kernel CSV (h0, h1, g0, g1 rows)");
}

void add_transform_options(CLI::App* sc, Options& o)
{
    sc->add_option("--variant", o.variant, "nonzerodc or zerodc")
        ->check(CLI::IsMember({"nonzerodc", "zerodc"}))
        ->capture_default_str();
    sc->add_flag("--gc,!--no-gc", o.gc, "gain compensation")->capture_default_str();
    sc->add_option("--levels", o.levels, "multiresolution levels")->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Critically sampled biorthogonal graph wavelet filterbanks"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sc) {
        sc->add_option("--seed", o.seed, "random seed")->capture_default_str();
        sc->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
    };

    bool table2_flag = false;
    auto* design = app.add_subcommand("design", "design a graphBior kernel set");
    common(design);
    add_kernel_options(design, o);
    design->add_flag("--table2", table2_flag, "compare with the published rows");

    int rb_n = 300;
    double rb_p = -1.0;
    auto* rbip = app.add_subcommand("random-bipartite", "generate a random bipartite graph");
    common(rbip);
    rbip->add_option("--n", rb_n, "nodes per side")->capture_default_str();
    rbip->add_option("--p", rb_p, "link probability (default 2 ln N / N)");

    Sources src;
    auto* tr = app.add_subcommand("transform", "analyze, sparsify and synthesize a signal");
    common(tr);
    add_kernel_options(tr, o);
    add_transform_options(tr, o);
    tr->add_option("--keep", o.keep, "fraction of detail coefficients kept")->capture_default_str();
    auto* ea = tr->add_option("--edge-aware", o.edge_aware, "edge-aware image graph [threshold] [min-component]")
                   ->expected(0, 2);
    tr->add_option("--graph", src.graph, "graph file");
    tr->add_option("--signal", src.signal, "signal file (one value per line)");
    tr->add_option("--decomposition", src.decomposition, "decomposition file");
    tr->add_option("--random-bipartite", src.random_bipartite, "random bipartite graph, nodes per side");
    tr->add_option("--planar", src.planar, "synthetic planar graph with a piecewise-constant signal");
    tr->add_option("--image", src.image, "PGM image");
    tr->add_option("--disk-scene", src.disk_scene, "generated disk scene of the given size");
    tr->add_option("--edge-map", src.edge_map, "PGM edge map for --edge-aware (0 = edge)");

    std::vector<std::string> designs{"1,1", "3,3", "5,5"};
    int ensemble = 10, sweep_n = 100;
    bool ideal = true;
    auto* sw = app.add_subcommand("sweep-spreads", "spatial/spectral spreads over a random ensemble");
    common(sw);
    sw->add_option("--designs", designs, "designs as k0,k1 ...")->capture_default_str();
    sw->add_option("--ensemble", ensemble, "graphs in the ensemble")->capture_default_str();
    sw->add_option("--n", sweep_n, "nodes per side")->capture_default_str();
    sw->add_flag("--ideal,!--no-ideal", ideal, "include the ideal half-band row")->capture_default_str();

    int points = 1001;
    auto* sp = app.add_subcommand("spectrum", "kernel responses and reconstruction check on [0, 2]");
    common(sp);
    add_kernel_options(sp, o);
    sp->add_option("--points", points, "grid size")->capture_default_str();

    std::string vgraph, vdecomp;
    auto* ve = app.add_subcommand("verify", "check a kernel set, optionally round-trip on a graph");
    common(ve);
    add_kernel_options(ve, o);
    add_transform_options(ve, o);
    ve->add_option("--graph", vgraph, "graph file");
    ve->add_option("--decomposition", vdecomp, "decomposition file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitValidation;
    }

    try {
        if (design->parsed())
            return cmd_design(o, table2_flag);
        if (rbip->parsed())
            return cmd_random_bipartite(o, rb_n, rb_p);
        if (tr->parsed())
            return cmd_transform(o, src, ea->count() > 0);
        if (sw->parsed())
            return cmd_sweep_spreads(o, designs, ensemble, sweep_n, ideal);
        if (sp->parsed())
            return cmd_spectrum(o, points);
        if (ve->parsed())
            return cmd_verify(o, vgraph, vdecomp);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
