#include "graphbior/poly.hpp"
#include "graphbior/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <sstream>

#include <unsupported/Eigen/Polynomials>

namespace graphbior {

namespace {

void trim(std::vector<double>& c)
{
    while (!c.empty() && c.back() == 0.0)
        c.pop_back();
}

using cld = std::complex<long double>;

cld eval_c(const std::vector<double>& c, cld z)
{
    cld acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * z + static_cast<long double>(*it);
    return acc;
}

// magnitude scale for the residual test at z
long double abs_scale(const std::vector<double>& c, long double r)
{
    long double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * r + std::fabs(static_cast<long double>(*it));
    return acc;
}

std::complex<double> polish(const std::vector<double>& c, std::complex<double> z0)
{
    std::vector<double> dc;
    for (size_t k = 1; k < c.size(); ++k)
        dc.push_back(static_cast<double>(k) * c[k]);
    cld z(z0.real(), z0.imag());
    long double best = std::abs(eval_c(c, z));
    for (int it = 0; it < 30 && best > 0; ++it) {
        cld d = eval_c(dc, z);
        if (std::abs(d) == 0)
            break;
        cld zn = z - eval_c(c, z) / d;
        long double r = std::abs(eval_c(c, zn));
        if (!(r < best))
            break;
        z = zn;
        best = r;
    }
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

} // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs))
{
    trim(c_);
}

Polynomial::Polynomial(std::initializer_list<double> coeffs) : c_(coeffs)
{
    trim(c_);
}

Polynomial Polynomial::constant(double c)
{
    return Polynomial(std::vector<double>{c});
}

Polynomial Polynomial::monomial(int k, double c)
{
    std::vector<double> v(static_cast<size_t>(k) + 1, 0.0);
    v[static_cast<size_t>(k)] = c;
    return Polynomial(std::move(v));
}

double Polynomial::operator[](int k) const
{
    if (k < 0 || k >= static_cast<int>(c_.size()))
        return 0.0;
    return c_[static_cast<size_t>(k)];
}

double Polynomial::max_abs_coeff() const
{
    double m = 0;
    for (double v : c_)
        m = std::max(m, std::fabs(v));
    return m;
}

double eval(const Polynomial& p, double x)
{
    const auto& c = p.coeffs();
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

long double eval_ld(const Polynomial& p, long double x)
{
    const auto& c = p.coeffs();
    long double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + static_cast<long double>(*it);
    return acc;
}

std::complex<double> eval(const Polynomial& p, std::complex<double> z)
{
    std::complex<double> acc = 0;
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

Polynomial add(const Polynomial& a, const Polynomial& b)
{
    std::vector<double> c(std::max(a.coeffs().size(), b.coeffs().size()), 0.0);
    for (size_t k = 0; k < c.size(); ++k)
        c[k] = a[static_cast<int>(k)] + b[static_cast<int>(k)];
    return Polynomial(std::move(c));
}

Polynomial sub(const Polynomial& a, const Polynomial& b)
{
    return add(a, scale(b, -1.0));
}

Polynomial mul(const Polynomial& a, const Polynomial& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    const auto& x = a.coeffs();
    const auto& y = b.coeffs();
    std::vector<long double> acc(x.size() + y.size() - 1, 0.0L);
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j)
            acc[i + j] += static_cast<long double>(x[i]) * y[j];
    return Polynomial(std::vector<double>(acc.begin(), acc.end()));
}

Polynomial scale(const Polynomial& a, double s)
{
    std::vector<double> c = a.coeffs();
    for (double& v : c)
        v *= s;
    return Polynomial(std::move(c));
}

Polynomial derivative(const Polynomial& p)
{
    const auto& c = p.coeffs();
    if (c.size() <= 1)
        return {};
    std::vector<double> d(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k)
        d[k - 1] = static_cast<double>(k) * c[k];
    return Polynomial(std::move(d));
}

Polynomial shift_variable(const Polynomial& p, double a, double s)
{
    const auto& c = p.coeffs();
    if (c.empty())
        return {};
    // Horner on polynomials: q <- q*(a + s x) + c_j
    std::vector<long double> q(c.size(), 0.0L);
    const long double la = a, ls = s;
    size_t len = 1;
    q[0] = c.back();
    for (size_t j = c.size() - 1; j-- > 0;) {
        for (size_t k = len; k > 0; --k)
            q[k] = q[k] * la + q[k - 1] * ls;
        q[0] = q[0] * la + static_cast<long double>(c[j]);
        ++len;
    }
    return Polynomial(std::vector<double>(q.begin(), q.end()));
}

Polynomial mirror(const Polynomial& p)
{
    return shift_variable(p, 2.0, -1.0);
}

Polynomial divide_linear(const Polynomial& p, double a, double& remainder)
{
    const auto& c = p.coeffs();
    if (c.empty()) {
        remainder = 0;
        return {};
    }
    std::vector<double> q(c.size() - 1, 0.0);
    long double acc = c.back();
    for (size_t k = c.size() - 1; k-- > 0;) {
        q[k] = static_cast<double>(acc);
        acc = acc * a + c[k];
    }
    remainder = static_cast<double>(acc);
    return Polynomial(std::move(q));
}

void sort_roots(std::vector<std::complex<double>>& r)
{
    std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real())
            return x.real() < y.real();
        return x.imag() < y.imag();
    });
}

RootSet roots(const Polynomial& p)
{
    return roots(p, {});
}

RootSet roots(const Polynomial& p, const std::vector<KnownRoot>& known)
{
    if (p.degree() < 1)
        throw ValidationError("no roots of constant polynomial");

    RootSet out;
    out.scale = p.coeffs().back();
    Polynomial work = p;

    for (const auto& kr : known) {
        for (int m = 0; m < kr.multiplicity; ++m) {
            if (work.degree() < 1)
                throw ValidationError("declared root multiplicity exceeds degree");
            double rem = 0;
            double mag = static_cast<double>(abs_scale(work.coeffs(), std::max(std::fabs(kr.at), 1.0)));
            Polynomial q = divide_linear(work, kr.at, rem);
            if (std::fabs(rem) > tol::root * std::max(mag, 1e-300))
                throw NumericalError("declared root at " + std::to_string(kr.at) +
                                     " is not present with the stated multiplicity");
            work = q;
            out.roots.emplace_back(kr.at, 0.0);
        }
    }

    // exact zeros at the origin
    std::vector<double> c = work.coeffs();
    size_t lead0 = 0;
    while (lead0 < c.size() && c[lead0] == 0.0)
        ++lead0;
    for (size_t k = 0; k < lead0; ++k)
        out.roots.emplace_back(0.0, 0.0);
    c.erase(c.begin(), c.begin() + static_cast<long>(lead0));

    std::vector<std::complex<double>> found;
    if (c.size() == 2) {
        found.emplace_back(-c[0] / c[1], 0.0);
    } else if (c.size() > 2) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(c.size()));
        for (size_t k = 0; k < c.size(); ++k)
            v[static_cast<Eigen::Index>(k)] = c[k];
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(v);
        for (Eigen::Index i = 0; i < solver.roots().size(); ++i)
            found.push_back(polish(c, solver.roots()[i]));
    }

    // conjugate pairing
    std::vector<std::complex<double>> paired;
    std::vector<std::complex<double>> upper, lower;
    for (auto z : found) {
        double m = std::max(1.0, std::abs(z));
        if (std::fabs(z.imag()) <= tol::imag * m)
            paired.emplace_back(z.real(), 0.0);
        else if (z.imag() > 0)
            upper.push_back(z);
        else
            lower.push_back(z);
    }
    std::vector<bool> used(lower.size(), false);
    for (auto z : upper) {
        double best = 1e300;
        size_t bi = lower.size();
        for (size_t j = 0; j < lower.size(); ++j) {
            if (used[j])
                continue;
            double d = std::abs(z - std::conj(lower[j]));
            if (d < best) {
                best = d;
                bi = j;
            }
        }
        if (bi == lower.size() || best > tol::pairing * std::max(1.0, std::abs(z)))
            throw NumericalError("unpaired complex root");
        used[bi] = true;
        double re = 0.5 * (z.real() + lower[bi].real());
        double im = 0.5 * (z.imag() - lower[bi].imag());
        paired.emplace_back(re, im);
        paired.emplace_back(re, -im);
    }
    if (upper.size() != lower.size())
        throw NumericalError("unpaired complex root");

    for (auto z : paired) {
        cld zz(z.real(), z.imag());
        long double r = std::abs(eval_c(c, zz));
        long double s = abs_scale(c, std::abs(zz));
        if (r > tol::root * s)
            throw NumericalError("root residual above tolerance");
    }

    out.roots.insert(out.roots.end(), paired.begin(), paired.end());
    sort_roots(out.roots);
    return out;
}

Polynomial from_roots(const RootSet& rs)
{
    std::vector<double> real_roots;
    std::vector<std::complex<double>> upper, lower;
    for (auto z : rs.roots) {
        double m = std::max(1.0, std::abs(z));
        if (std::fabs(z.imag()) <= tol::imag * m)
            real_roots.push_back(z.real());
        else if (z.imag() > 0)
            upper.push_back(z);
        else
            lower.push_back(z);
    }
    if (upper.size() != lower.size())
        throw ValidationError("non-real coefficient result");

    std::vector<long double> acc{static_cast<long double>(rs.scale)};
    auto times = [&acc](const std::vector<long double>& f) {
        std::vector<long double> r(acc.size() + f.size() - 1, 0.0L);
        for (size_t i = 0; i < acc.size(); ++i)
            for (size_t j = 0; j < f.size(); ++j)
                r[i + j] += acc[i] * f[j];
        acc.swap(r);
    };
    for (double r : real_roots)
        times({-static_cast<long double>(r), 1.0L});

    std::vector<bool> used(lower.size(), false);
    for (auto z : upper) {
        size_t bi = lower.size();
        double best = 1e300;
        for (size_t j = 0; j < lower.size(); ++j) {
            if (used[j])
                continue;
            double d = std::abs(z - std::conj(lower[j]));
            if (d < best) {
                best = d;
                bi = j;
            }
        }
        if (bi == lower.size() || best > tol::pairing * std::max(1.0, std::abs(z)))
            throw ValidationError("non-real coefficient result");
        used[bi] = true;
        long double re = 0.5L * (static_cast<long double>(z.real()) + lower[bi].real());
        long double im = 0.5L * (static_cast<long double>(z.imag()) - lower[bi].imag());
        times({re * re + im * im, -2.0L * re, 1.0L});
    }
    return Polynomial(std::vector<double>(acc.begin(), acc.end()));
}

double matched_root_distance(const std::vector<std::complex<double>>& a,
                             const std::vector<std::complex<double>>& b)
{
    if (a.size() != b.size())
        throw ValidationError("root multisets differ in size (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    const size_t n = a.size();
    if (n == 0)
        return 0.0;
    // 1-based potentials formulation
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);
    for (size_t i = 1; i <= n; ++i) {
        p[0] = i;
        size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const size_t i0 = p[j0];
            double delta = inf;
            size_t j1 = 0;
            for (size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = std::abs(a[i0 - 1] - b[j - 1]) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double worst = 0.0;
    for (size_t j = 1; j <= n; ++j)
        worst = std::max(worst, std::abs(a[p[j] - 1] - b[j - 1]));
    return worst;
}

std::string to_csv(const Polynomial& p)
{
    std::ostringstream os;
    const auto& c = p.coeffs();
    if (c.empty())
        return "0";
    char buf[64];
    for (size_t k = 0; k < c.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", c[k]);
        if (k)
            os << ',';
        os << buf;
    }
    return os.str();
}

Polynomial parse_csv(const std::string& line)
{
    std::vector<double> c;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        try {
            c.push_back(std::stod(tok, &pos));
        } catch (const std::exception&) {
            throw ValidationError("bad polynomial coefficient '" + tok + "'");
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
            ++pos;
        if (pos != tok.size())
            throw ValidationError("bad polynomial coefficient '" + tok + "'");
    }
    return Polynomial(std::move(c));
}

double relative_coeff_distance(const Polynomial& a, const Polynomial& b)
{
    int n = std::max(a.degree(), b.degree());
    double num = 0;
    for (int k = 0; k <= n; ++k)
        num = std::max(num, std::fabs(a[k] - b[k]));
    double den = b.max_abs_coeff();
    return num / (den > 0 ? den : 1.0);
}

} // namespace graphbior
