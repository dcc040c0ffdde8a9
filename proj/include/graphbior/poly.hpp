#pragma once

#include <complex>
#include <string>
#include <vector>

namespace graphbior {

// Real polynomial, coefficients in ascending degree: coeffs()[k] multiplies x^k.
// Trailing exact zeros are trimmed, so the top coefficient is nonzero unless
// the polynomial is identically zero.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    static Polynomial constant(double c);
    static Polynomial monomial(int k, double c = 1.0);

    const std::vector<double>& coeffs() const { return c_; }
    int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    double operator[](int k) const;
    double max_abs_coeff() const;

    bool operator==(const Polynomial& o) const { return c_ == o.c_; }

private:
    std::vector<double> c_;
};

struct RootSet {
    std::vector<std::complex<double>> roots;
    double scale = 1.0; // leading coefficient
};

// A root the caller knows is there, divided out before numeric root finding.
struct KnownRoot {
    double at = 0.0;
    int multiplicity = 1;
};

namespace tol {
inline constexpr double root = 1e-7;
inline constexpr double imag = 1e-8;
inline constexpr double pairing = 1e-6;
} // namespace tol

double eval(const Polynomial& p, double x);
long double eval_ld(const Polynomial& p, long double x);
std::complex<double> eval(const Polynomial& p, std::complex<double> z);

Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial sub(const Polynomial& a, const Polynomial& b);
Polynomial mul(const Polynomial& a, const Polynomial& b);
Polynomial scale(const Polynomial& a, double s);
Polynomial derivative(const Polynomial& p);

// q(x) = p(a + s*x), binomial recombination accumulated in extended precision.
Polynomial shift_variable(const Polynomial& p, double a, double s);

// p(2 - x)
Polynomial mirror(const Polynomial& p);

// Divide by (x - a); returns the quotient and stores p(a) in remainder.
Polynomial divide_linear(const Polynomial& p, double a, double& remainder);

RootSet roots(const Polynomial& p);
RootSet roots(const Polynomial& p, const std::vector<KnownRoot>& known);
Polynomial from_roots(const RootSet& rs);

// Pairing of a with b minimizing the summed distance (Hungarian method);
// returns the largest matched distance. Sizes must agree.
double matched_root_distance(const std::vector<std::complex<double>>& a,
                             const std::vector<std::complex<double>>& b);

// Conjugate-symmetric ordering used everywhere roots are reported.
void sort_roots(std::vector<std::complex<double>>& r);

// Comma separated, ascending, 17 significant digits.
std::string to_csv(const Polynomial& p);
Polynomial parse_csv(const std::string& line);

// Coefficient-wise max |a - b| divided by max |b| (or by 1 when b is zero).
double relative_coeff_distance(const Polynomial& a, const Polynomial& b);

} // namespace graphbior
