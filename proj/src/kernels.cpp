#include "graphbior/kernels.hpp"
#include "graphbior/error.hpp"
#include "graphbior/io.hpp"
#include "graphbior/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/LU>

namespace graphbior {

namespace {

using MatLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

long double binom(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0L;
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

bool is_real(std::complex<double> z)
{
    return z.imag() == 0.0;
}

// residual factor values on the grid, normalised to 1 at lambda = 1
std::vector<double> factor_values(const std::vector<std::complex<double>>& rts, int at_two,
                                  const std::vector<double>& grid)
{
    std::vector<double> out(grid.size(), 1.0);
    for (size_t i = 0; i < grid.size(); ++i) {
        long double x = grid[i];
        long double v = 1.0L;
        for (int k = 0; k < at_two; ++k)
            v *= (x - 2.0L) / (1.0L - 2.0L);
        for (auto z : rts) {
            if (is_real(z)) {
                v *= (x - z.real()) / (1.0L - z.real());
            } else if (z.imag() > 0) {
                long double a = z.real(), b = z.imag();
                v *= ((x - a) * (x - a) + b * b) / ((1 - a) * (1 - a) + b * b);
            }
        }
        out[i] = static_cast<double>(v);
    }
    return out;
}

struct SplitValues {
    std::vector<double> h0, h1; // at s = 1
};

SplitValues split_values(const Split& sp, int k0, int k1)
{
    const auto& grid = theta_grid();
    SplitValues sv;
    sv.h0 = factor_values(sp.h0_roots, k0, grid);
    std::vector<double> mirrored(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        mirrored[i] = 2.0 - grid[i];
    sv.h1 = factor_values(sp.g0_roots, k1, mirrored);
    return sv;
}

double theta_at(const SplitValues& sv, double s)
{
    std::vector<double> a(sv.h0.size()), b(sv.h1.size());
    for (size_t i = 0; i < a.size(); ++i) {
        a[i] = s * sv.h0[i];
        b[i] = sv.h1[i] / s;
    }
    return theta_from_values(a, b).theta;
}

std::vector<double> sorted_real_parts(const std::vector<std::complex<double>>& r)
{
    std::vector<double> v;
    for (auto z : r)
        v.push_back(z.real());
    std::sort(v.begin(), v.end());
    return v;
}

// scale making prod (1 - r) * scale equal target
double scale_at_one(const std::vector<std::complex<double>>& rts, double target)
{
    long double at1 = 1.0L;
    for (auto z : rts) {
        if (is_real(z))
            at1 *= (1.0L - z.real());
        else if (z.imag() > 0)
            at1 *= (1.0L - z.real()) * (1.0L - z.real()) +
                   static_cast<long double>(z.imag()) * z.imag();
    }
    return static_cast<double>(target / at1);
}

Polynomial centered_from_roots(const std::vector<std::complex<double>>& rts, double scale)
{
    RootSet rs;
    rs.scale = scale;
    for (auto z : rts)
        rs.roots.emplace_back(z.real() - 1.0, z.imag());
    return from_roots(rs);
}

Polynomial negate_odd(const Polynomial& p)
{
    auto c = p.coeffs();
    for (size_t j = 1; j < c.size(); j += 2)
        c[j] = -c[j];
    return Polynomial(std::move(c));
}

// p(2 - x) for p = scale * prod (x - r): roots 2 - r, scale * (-1)^deg
Polynomial mirrored_from_roots(const std::vector<std::complex<double>>& rts, double lead)
{
    RootSet rs;
    for (auto z : rts)
        rs.roots.emplace_back(2.0 - z.real(), -z.imag());
    rs.scale = (rts.size() % 2 == 0) ? lead : -lead;
    return from_roots(rs);
}

} // namespace

const std::vector<double>& theta_grid()
{
    static const std::vector<double> grid = [] {
        std::vector<double> g(100);
        for (int i = 0; i < 100; ++i)
            g[static_cast<size_t>(i)] = 2.0 * i / 99.0;
        return g;
    }();
    return grid;
}

HalfBandKernel design_halfband(int K)
{
    if (K < 1 || K > kMaxDesignK)
        throw ValidationError("half-band order K=" + std::to_string(K) + " outside [1, " +
                              std::to_string(kMaxDesignK) + "]");
    HalfBandKernel hb;
    hb.K = K;
    hb.M = K - 1;

    // unknowns r_1..r_{K-1}; equations zero the coefficients of l^2, l^4, ..., l^{2K-2}
    const int n = K - 1;
    VecLD r = VecLD::Zero(K);
    r[0] = 1.0L;
    if (n > 0) {
        MatLD A(n, n);
        VecLD b(n);
        for (int row = 0; row < n; ++row) {
            const int j = 2 * (row + 1);
            for (int m = 1; m <= n; ++m)
                A(row, m - 1) = binom(K, j - m);
            b[row] = -binom(K, j);
        }
        Eigen::FullPivLU<MatLD> lu(A);
        VecLD x = lu.solve(b);
        long double res = (A * x - b).cwiseAbs().maxCoeff();
        long double scale = std::max<long double>(1.0L, b.cwiseAbs().maxCoeff());
        if (!(res <= 1e-8L * scale) || !lu.isInvertible())
            throw NumericalError("half-band linear system is too ill-conditioned for K=" +
                                 std::to_string(K));
        for (int m = 1; m <= n; ++m)
            r[m] = x[m - 1];
    }

    // (1+l)^K * R(l)
    std::vector<long double> prod(static_cast<size_t>(2 * K), 0.0L);
    for (int i = 0; i <= K; ++i)
        for (int m = 0; m < K; ++m)
            prod[static_cast<size_t>(i + m)] += binom(K, i) * r[m];

    std::vector<double> res(static_cast<size_t>(K));
    hb.residual_ld.resize(static_cast<size_t>(K));
    for (int m = 0; m < K; ++m) {
        res[static_cast<size_t>(m)] = static_cast<double>(r[m]);
        hb.residual_ld[static_cast<size_t>(m)] = r[m];
    }
    hb.residual = Polynomial(std::move(res));

    // mirror: p(1 + l) = p~(1 - l)
    std::vector<double> cen(prod.size());
    for (size_t j = 0; j < prod.size(); ++j)
        cen[j] = static_cast<double>(j % 2 ? -prod[j] : prod[j]);
    hb.centered = Polynomial(std::move(cen));
    hb.p = shift_variable(hb.centered, -1.0, 1.0);
    return hb;
}

std::vector<std::complex<double>> residual_roots(const HalfBandKernel& hb)
{
    std::vector<std::complex<double>> out;
    if (hb.residual.degree() < 1)
        return out;
    // Polish against the equivalent binomial series: with y = lambda / 2 the
    // residual factor is Q(y) = sum_{j<K} C(K-1+j, j) y^j, whose integer
    // coefficients are exact. The solved R is too ill-conditioned for this once
    // K is in the upper teens.
    using CLD = std::complex<long double>;
    std::vector<long double> q(static_cast<size_t>(hb.K));
    for (int j = 0; j < hb.K; ++j)
        q[static_cast<size_t>(j)] = binom(hb.K - 1 + j, j);
    for (auto z0 : roots(hb.residual).roots) {
        CLD y((1.0L - z0.real()) / 2.0L, -static_cast<long double>(z0.imag()) / 2.0L);
        for (int it = 0; it < 20; ++it) {
            CLD v = q.back(), dv = 0.0L;
            for (size_t j = q.size() - 1; j-- > 0;) {
                dv = dv * y + v;
                v = v * y + q[j];
            }
            if (std::abs(dv) == 0.0L)
                break;
            const CLD step = v / dv;
            y -= step;
            if (std::abs(step) <= 1e-19L * std::max<long double>(1.0L, std::abs(y)))
                break;
        }
        if (z0.imag() == 0.0)
            y = CLD(y.real(), 0.0L);
        out.emplace_back(static_cast<double>(2.0L * y.real()), static_cast<double>(2.0L * y.imag()));
    }
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = i + 1; j < out.size(); ++j)
            if (std::abs(out[i] - out[j]) < 1e-9)
                throw NumericalError("residual roots collapsed while polishing (K=" +
                                     std::to_string(hb.K) + ")");
    sort_roots(out);
    return out;
}

std::vector<Split> enumerate_splits(const HalfBandKernel& hb, int k0, int k1)
{
    if (k0 < 1 || k1 < 1 || k0 + k1 != hb.K)
        throw ValidationError("need k0, k1 >= 1 with k0 + k1 = K");
    auto rr = residual_roots(hb);

    // atoms: single real roots and whole conjugate pairs
    std::vector<std::vector<std::complex<double>>> atoms;
    for (auto z : rr) {
        if (is_real(z))
            atoms.push_back({z});
        else if (z.imag() > 0)
            atoms.push_back({std::conj(z), z});
    }

    std::vector<Split> out;
    std::vector<int> pick;
    std::function<void(size_t, int)> rec = [&](size_t i, int need) {
        if (need == 0) {
            Split sp;
            std::vector<bool> chosen(atoms.size(), false);
            for (int a : pick)
                chosen[static_cast<size_t>(a)] = true;
            for (size_t a = 0; a < atoms.size(); ++a)
                for (auto z : atoms[a])
                    (chosen[a] ? sp.h0_roots : sp.g0_roots).push_back(z);
            sort_roots(sp.h0_roots);
            sort_roots(sp.g0_roots);
            out.push_back(std::move(sp));
            return;
        }
        if (i >= atoms.size())
            return;
        const int sz = static_cast<int>(atoms[i].size());
        if (sz <= need) {
            pick.push_back(static_cast<int>(i));
            rec(i + 1, need - sz);
            pick.pop_back();
        }
        rec(i + 1, need);
    };
    rec(0, k1);

    for (auto& sp : out)
        sp.theta = theta_at(split_values(sp, k0, k1), 1.0);
    return out;
}

double split_theta(const Split& split, int k0, int k1, double s)
{
    return theta_at(split_values(split, k0, k1), s);
}

KernelSet kernels_from_split(const HalfBandKernel& hb, int k0, int k1, const Split& split,
                             double s)
{
    (void)hb;
    std::vector<std::complex<double>> h0r(static_cast<size_t>(k0), {2.0, 0.0});
    h0r.insert(h0r.end(), split.h0_roots.begin(), split.h0_roots.end());
    std::vector<std::complex<double>> g0r(static_cast<size_t>(k1), {2.0, 0.0});
    g0r.insert(g0r.end(), split.g0_roots.begin(), split.g0_roots.end());

    KernelSet ks;
    ks.k0 = k0;
    ks.k1 = k1;
    ks.scale_split = s;
    const double sh = scale_at_one(h0r, s), sg = scale_at_one(g0r, 1.0 / s);
    ks.h0 = from_roots(RootSet{h0r, sh});
    ks.g0 = from_roots(RootSet{g0r, sg});
    ks.h0c = centered_from_roots(h0r, sh);
    ks.g0c = centered_from_roots(g0r, sg);
    ks.h1c = negate_odd(ks.g0c);
    ks.g1c = negate_odd(ks.h0c);
    ks.h1 = mirrored_from_roots(g0r, ks.g0.coeffs().back());
    ks.g1 = mirrored_from_roots(h0r, ks.h0.coeffs().back());
    fill_gains(ks);
    auto th = theta_of(ks.h0, ks.h1, theta_grid());
    ks.theta = th.theta;
    ks.riesz_A = th.A;
    ks.riesz_B = th.B;
    return ks;
}

KernelSet factorize(const HalfBandKernel& hb, int k0, int k1)
{
    auto splits = enumerate_splits(hb, k0, k1);
    if (splits.empty()) {
        auto nf = nearest_feasible(k0, k1);
        std::string hint = nf.first > 0 ? " (nearest feasible: (" + std::to_string(nf.first) +
                                              "," + std::to_string(nf.second) + "))"
                                        : "";
        throw ValidationError("parity-infeasible factorization for graphBior(" +
                              std::to_string(k0) + "," + std::to_string(k1) + ")" + hint);
    }

    size_t best = 0;
    for (size_t i = 1; i < splits.size(); ++i) {
        double d = splits[i].theta - splits[best].theta;
        if (d > 1e-9)
            best = i;
        else if (std::fabs(d) <= 1e-9 &&
                 sorted_real_parts(splits[i].h0_roots) < sorted_real_parts(splits[best].h0_roots))
            best = i;
    }
    const Split& sp = splits[best];
    const SplitValues sv = split_values(sp, k0, k1);

    // coarse scan in log2(s), then golden-section refinement around the best node
    const int steps = 96;
    double best_t = 0, best_theta = -1;
    int best_i = 0;
    for (int i = 0; i <= steps; ++i) {
        double t = -3.0 + 6.0 * i / steps;
        double th = theta_at(sv, std::exp2(t));
        if (th > best_theta + 1e-12) {
            best_theta = th;
            best_t = t;
            best_i = i;
        }
    }
    double lo = std::exp2(-3.0 + 6.0 * std::max(0, best_i - 1) / steps);
    double hi = std::exp2(-3.0 + 6.0 * std::min(steps, best_i + 1) / steps);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = theta_at(sv, x1), f2 = theta_at(sv, x2);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = theta_at(sv, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = theta_at(sv, x1);
        }
    }
    double s = 0.5 * (lo + hi);
    if (theta_at(sv, s) < best_theta)
        s = std::exp2(best_t);

    return kernels_from_split(hb, k0, k1, sp, s);
}

KernelSet design_kernels(int k0, int k1)
{
    if (k0 < 1 || k1 < 1)
        throw ValidationError("k0 and k1 must be at least 1");
    return factorize(design_halfband(k0 + k1), k0, k1);
}

std::pair<int, int> nearest_feasible(int k0, int k1)
{
    const int K = k0 + k1;
    if (K < 2 || K > kMaxDesignK)
        return {0, 0};
    auto hb = design_halfband(K);
    for (int d = 0; d < K; ++d) {
        for (int a : {k0 - d, k0 + d}) {
            if (a < 1 || a > K - 1)
                continue;
            if (!enumerate_splits(hb, a, K - a).empty())
                return {a, K - a};
        }
    }
    return {0, 0};
}

void fill_gains(KernelSet& ks)
{
    double h00 = std::fabs(eval(ks.h0, 0.0));
    double h12 = std::fabs(eval(ks.h1, 2.0));
    ks.gain_low = h00 > 0 ? 1.0 / h00 : 1.0;
    ks.gain_high = h12 > 0 ? 1.0 / h12 : 1.0;
}

void fill_centered(KernelSet& ks)
{
    auto fill = [](Polynomial& c, const Polynomial& lam) {
        if (c.is_zero() && !lam.is_zero())
            c = shift_variable(lam, 1.0, 1.0);
    };
    fill(ks.h0c, ks.h0);
    fill(ks.h1c, ks.h1);
    fill(ks.g0c, ks.g0);
    fill(ks.g1c, ks.g1);
}

KernelReport verify_kernelset(const KernelSet& in)
{
    KernelSet ks = in;
    fill_centered(ks);
    KernelReport rep;
    const int n = 1001;
    rep.lambda.resize(n);
    rep.C.resize(n);
    rep.D.resize(n);
    for (int i = 0; i < n; ++i) {
        const long double l = 2.0L * i / (n - 1), m = 2.0L - l;
        const long double x = l - 1.0L, xm = m - 1.0L;
        const long double h0 = eval_ld(ks.h0c, x), h1 = eval_ld(ks.h1c, x);
        const long double g0 = eval_ld(ks.g0c, x), g1 = eval_ld(ks.g1c, x);
        const long double h0m = eval_ld(ks.h0c, xm), h1m = eval_ld(ks.h1c, xm);
        const long double g0m = eval_ld(ks.g0c, xm);
        rep.max_pr_deviation =
            std::max(rep.max_pr_deviation, static_cast<double>(std::fabs(g0 * h0 + g1 * h1 - 2)));
        rep.max_alias_deviation =
            std::max(rep.max_alias_deviation, static_cast<double>(std::fabs(g0 * h0m - g1 * h1m)));
        rep.max_halfband_deviation = std::max(
            rep.max_halfband_deviation, static_cast<double>(std::fabs(h0 * g0 + h0m * g0m - 2)));
        rep.lambda[static_cast<size_t>(i)] = static_cast<double>(l);
        rep.C[static_cast<size_t>(i)] = static_cast<double>(h0 * h0 + h1 * h1);
        rep.D[static_cast<size_t>(i)] = static_cast<double>(h1 * h1m - h0 * h0m);
    }
    // h1(lambda) = g0(2 - lambda) is h1c(l) = g0c(-l) in the centered variable,
    // which avoids the 2^K growth of re-expanding about lambda = 2
    rep.mirror_h1_deviation = relative_coeff_distance(ks.h1c, negate_odd(ks.g0c));
    rep.mirror_g1_deviation = relative_coeff_distance(ks.g1c, negate_odd(ks.h0c));
    auto th = theta_of(ks.h0, ks.h1, theta_grid());
    rep.theta = th.theta;
    rep.A = th.A;
    rep.B = th.B;
    KernelSet tmp = ks;
    fill_gains(tmp);
    rep.gain_low = tmp.gain_low;
    rep.gain_high = tmp.gain_high;
    return rep;
}

int filter_length(const KernelSet& ks)
{
    return std::max(ks.h0.degree(), ks.g0.degree());
}

std::uint64_t kernel_hash(const KernelSet& ks)
{
    Fnv1a h;
    h.i64(ks.k0);
    h.i64(ks.k1);
    for (const Polynomial* p : {&ks.h0, &ks.h1, &ks.g0, &ks.g1}) {
        h.u64(p->coeffs().size());
        for (double c : p->coeffs())
            h.f64(c);
    }
    h.f64(ks.gain_low);
    h.f64(ks.gain_high);
    return h.value();
}

std::string kernels_to_csv(const KernelSet& ks)
{
    std::string out;
    for (const Polynomial* p : {&ks.h0, &ks.h1, &ks.g0, &ks.g1})
        out += to_csv(*p) + "\n";
    return out;
}

KernelSet parse_kernels_csv(const std::string& text, const std::string& source)
{
    std::vector<Polynomial> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        try {
            rows.push_back(parse_csv(line));
        } catch (const ValidationError& e) {
            throw ValidationError(source + ": " + e.what());
        }
    }
    if (rows.size() != 4)
        throw ValidationError(source + ": expected 4 kernel rows (h0, h1, g0, g1), got " +
                              std::to_string(rows.size()));
    KernelSet ks;
    ks.h0 = rows[0];
    ks.h1 = rows[1];
    ks.g0 = rows[2];
    ks.g1 = rows[3];
    int z = 0;
    while (z < ks.h1.degree() && ks.h1[z] == 0.0)
        ++z;
    ks.k1 = z;
    ks.k0 = std::max(ks.h0.degree(), ks.g0.degree()) - z;
    fill_gains(ks);
    fill_centered(ks);
    auto th = theta_of(ks.h0, ks.h1, theta_grid());
    ks.theta = th.theta;
    ks.riesz_A = th.A;
    ks.riesz_B = th.B;
    return ks;
}

Polynomial from_descending(const std::vector<double>& desc)
{
    return Polynomial(std::vector<double>(desc.rbegin(), desc.rend()));
}

const Table2Row* find_table2(int k0, int k1)
{
    for (const auto& r : table2())
        if (r.k0 == k0 && r.k1 == k1)
            return &r;
    return nullptr;
}

namespace {

// least-squares s with s * a ~ b
double ls_scale(const Polynomial& a, const Polynomial& b)
{
    double num = 0, den = 0;
    const int n = std::max(a.degree(), b.degree());
    for (int j = 0; j <= n; ++j) {
        num += a[j] * b[j];
        den += a[j] * a[j];
    }
    return den > 0 ? num / den : 1.0;
}

double scaled_distance(const Polynomial& a, const Polynomial& b)
{
    const double s = ls_scale(a, b);
    double d = 0;
    const int n = std::max(a.degree(), b.degree());
    for (int j = 0; j <= n; ++j)
        d = std::max(d, std::fabs(s * a[j] - b[j]));
    return d;
}

} // namespace

Table2Comparison compare_table2(const Table2Row& row, const KernelSet& ks)
{
    Table2Comparison c;
    const Polynomial th0 = from_descending(row.h0_desc), th1 = from_descending(row.h1_desc);
    const std::vector<KnownRoot> at_zero{{0.0, ks.k1}};
    auto rd = roots(ks.h1, at_zero).roots;
    auto rt = roots(th1, at_zero).roots;
    c.h1_root_distance = matched_root_distance(rd, rt);

    // published rows carry 4 decimals
    const double s1 = ls_scale(ks.h1, th1);
    std::vector<double> rc(ks.h1.coeffs());
    for (auto& x : rc)
        x = std::round(s1 * x * 1e4) / 1e4;
    auto rr = roots(Polynomial(rc), at_zero).roots;
    c.rounded_root_distance = matched_root_distance(rr, rt);

    c.h0_coeff_distance = scaled_distance(ks.h0, th0);
    c.h1_coeff_distance = scaled_distance(ks.h1, th1);

    // g0(1 + l) = h1(1 - l)
    const auto hb = design_halfband(row.k0 + row.k1);
    const Polynomial prod = mul(shift_variable(th0, 1.0, 1.0), shift_variable(th1, 1.0, -1.0));
    const double s = ls_scale(hb.centered, prod);
    const double big = std::max(prod.max_abs_coeff(), 1e-300);
    const int n = std::max(prod.degree(), hb.centered.degree());
    for (int j = 0; j <= n; ++j) {
        const double ref = s * hb.centered[j];
        const double d = std::fabs(ref - prod[j]);
        if (std::fabs(hb.centered[j]) > 1e-9 * hb.centered.max_abs_coeff())
            c.product_distance = std::max(c.product_distance, d / std::fabs(ref));
        else
            c.product_zero_distance = std::max(c.product_zero_distance, d / big);
    }
    return c;
}

} // namespace graphbior
