#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphbior/bipartite.hpp"
#include "graphbior/error.hpp"
#include "graphbior/experiments.hpp"
#include "graphbior/filterbank.hpp"
#include "graphbior/kernels.hpp"
#include "graphbior/metrics.hpp"

namespace py = pybind11;
using namespace graphbior;

namespace {

using EdgeList = std::vector<std::tuple<int, int, double>>;

Graph make_graph(int n, const EdgeList& edges)
{
    std::vector<Edge> e;
    e.reserve(edges.size());
    for (const auto& [u, v, w] : edges)
        e.push_back({u, v, w});
    return Graph(n, std::move(e));
}

EdgeList edge_list(const Graph& g)
{
    EdgeList out;
    for (const auto& e : g.edges())
        out.emplace_back(e.u, e.v, e.w);
    return out;
}

py::dict kernel_dict(const KernelSet& ks)
{
    py::dict d;
    d["k0"] = ks.k0;
    d["k1"] = ks.k1;
    d["h0"] = ks.h0.coeffs();
    d["h1"] = ks.h1.coeffs();
    d["g0"] = ks.g0.coeffs();
    d["g1"] = ks.g1.coeffs();
    d["theta"] = ks.theta;
    d["gain_low"] = ks.gain_low;
    d["gain_high"] = ks.gain_high;
    return d;
}

py::dict transform(int n, const EdgeList& edges, const Signal& f, int k0, int k1,
                   const std::string& variant, bool gc, int levels, double keep)
{
    Graph g = make_graph(n, edges);
    FilterbankConfig cfg;
    cfg.kernels = design_kernels(k0, k1);
    cfg.variant = parse_variant(variant);
    cfg.gain_compensation = gc;
    cfg.levels = levels;
    TransformResult res;
    {
        py::gil_scoped_release release;
        res = run_transform(g, auto_decompose(g), cfg, f, keep);
    }
    py::dict d;
    d["reconstruction"] = res.reconstruction;
    d["snr"] = res.snr;
    d["coefficients"] = res.coefficient_count;
    d["detail_coefficients"] = detail_count(res.tree);
    return d;
}

} // namespace

PYBIND11_MODULE(_graphbior, m)
{
    m.doc() = "Two-channel biorthogonal wavelet filterbanks on graphs";
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("design_halfband", [](int K) { return design_halfband(K).p.coeffs(); }, py::arg("K"),
          "Half-band product kernel p(lambda), ascending coefficients.");
    m.def("design_kernels", [](int k0, int k1) { return kernel_dict(design_kernels(k0, k1)); },
          py::arg("k0"), py::arg("k1"));
    m.def(
        "verify_kernels",
        [](int k0, int k1) {
            auto rep = verify_kernelset(design_kernels(k0, k1));
            py::dict d;
            d["pr_deviation"] = rep.max_pr_deviation;
            d["alias_deviation"] = rep.max_alias_deviation;
            d["halfband_deviation"] = rep.max_halfband_deviation;
            d["theta"] = rep.theta;
            return d;
        },
        py::arg("k0"), py::arg("k1"));
    m.def(
        "random_bipartite",
        [](int n_per_side, std::uint64_t seed) {
            auto rb = random_bipartite(n_per_side, seed);
            return py::make_tuple(rb.graph.n(), edge_list(rb.graph), rb.partition.to_string());
        },
        py::arg("n_per_side"), py::arg("seed"),
        "Returns (n, edges, sides) with sides a string of 'L'/'H'.");
    m.def("transform", &transform, py::arg("n"), py::arg("edges"), py::arg("signal"),
          py::arg("k0") = 6, py::arg("k1") = 6, py::arg("variant") = "nonzerodc",
          py::arg("gc") = true, py::arg("levels") = 1, py::arg("keep") = 1.0,
          "Analyze, keep the largest detail coefficients, synthesize.");
    m.def(
        "eigenvalues",
        [](int n, const EdgeList& edges) { return Eigen::VectorXd(eig(make_graph(n, edges)).eigenvalues); },
        py::arg("n"), py::arg("edges"));
    m.def("snr", &snr, py::arg("ref"), py::arg("test"));
}
