#pragma once

// Test-only references for the Faddeeva function.
//
// precise_faddeeva_full: the Maclaurin series of erf summed in multi-hundred-digit
// arithmetic, then w(z) = exp(-z^2) (1 - erf(-iz)). Independent of the library
// path (no continued fractions, no double rounding inside the sum). Digits must
// exceed roughly 0.87 |z|^2 + 20, so it is only practical for |z| <= 10 or so.
//
// precise_faddeeva_fraction: the continued fraction in extended precision, for
// large |z|.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <complex>
#include <stdexcept>

namespace udw::testing {

template <unsigned Digits>
using Precise = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

template <class Real>
struct PreciseComplex {
    Real re;
    Real im;
};

template <class Real>
PreciseComplex<Real> mul(const PreciseComplex<Real>& a, const PreciseComplex<Real>& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

struct PreciseW {
    std::complex<double> w;
    // w(z) - i / (sqrt(pi) z), subtracted before rounding to double
    std::complex<double> remainder;
};

template <unsigned Digits = 150>
PreciseW precise_faddeeva_full(std::complex<double> z)
{
    using Real = Precise<Digits>;
    using C = PreciseComplex<Real>;
    const C zz{Real(z.real()), Real(z.imag())};
    const C u{zz.im, -zz.re};  // -i z
    const C u2 = mul(u, u);
    const C minus_u2{-u2.re, -u2.im};

    C term = u;
    C sum = u;
    const Real tiny = pow(Real(10), -static_cast<int>(Digits) + 5);
    for (int n = 1; n < 200000; ++n) {
        term = mul(term, minus_u2);
        term.re /= n;
        term.im /= n;
        const Real denom = 2 * n + 1;
        sum.re += term.re / denom;
        sum.im += term.im / denom;
        if (n > 10 && (abs(term.re) + abs(term.im)) / denom < tiny)
            break;
    }
    const Real sqrt_pi = sqrt(boost::math::constants::pi<Real>());
    const Real two_over_sqrt_pi = 2 / sqrt_pi;
    const C erfc_u{1 - two_over_sqrt_pi * sum.re, -two_over_sqrt_pi * sum.im};

    const C z2 = mul(zz, zz);
    const Real mag = exp(-z2.re);
    const C e{mag * cos(-z2.im), mag * sin(-z2.im)};
    const C w = mul(e, erfc_u);

    // i / (sqrt(pi) z) = i conj(z) / (sqrt(pi) |z|^2)
    const Real norm = sqrt_pi * (zz.re * zz.re + zz.im * zz.im);
    const C lead{zz.im / norm, zz.re / norm};
    return {{static_cast<double>(w.re), static_cast<double>(w.im)},
            {static_cast<double>(w.re - lead.re), static_cast<double>(w.im - lead.im)}};
}

/// Laplace continued fraction w(z) = (i / sqrt(pi)) / (z - (1/2) / (z - 1 / (z - (3/2) / ...)))
/// summed bottom-up from `depth` terms in 50-digit arithmetic. For Im z >= 0 and
/// |z| >= 10 it converges well inside double precision after a few hundred terms;
/// the result is checked against twice the depth.
inline std::complex<double> precise_faddeeva_fraction(std::complex<double> z, int depth = 4000)
{
    using Real = Precise<50>;
    using C = PreciseComplex<Real>;
    auto evaluate = [&](int n_terms) {
        const C zz{Real(z.real()), Real(z.imag())};
        C tail{Real(0), Real(0)};
        for (int n = n_terms; n >= 1; --n) {
            // tail <- (n/2) / (z - tail)
            const C d{zz.re - tail.re, zz.im - tail.im};
            const Real norm = d.re * d.re + d.im * d.im;
            const Real a = Real(n) / 2;
            tail = {a * d.re / norm, -a * d.im / norm};
        }
        const C d{zz.re - tail.re, zz.im - tail.im};
        const Real norm = d.re * d.re + d.im * d.im;
        const Real scale = 1 / sqrt(boost::math::constants::pi<Real>());
        // i / d = i conj(d) / |d|^2
        return std::complex<double>(static_cast<double>(scale * d.im / norm), static_cast<double>(scale * d.re / norm));
    };
    const std::complex<double> w = evaluate(depth);
    const std::complex<double> check = evaluate(2 * depth);
    if (std::abs(w - check) > 1e-15 * std::abs(check))
        throw std::runtime_error("precise_faddeeva_fraction: not converged");
    return check;
}

inline std::complex<double> precise_faddeeva(std::complex<double> z)
{
    return precise_faddeeva_full<150>(z).w;
}

} // namespace udw::testing
