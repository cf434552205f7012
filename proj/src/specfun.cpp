#include "udw/specfun.hpp"

#include "udw/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace udw {
namespace {

constexpr double kInvSqrtPi = 0.56418958354775628694807945156077259;
constexpr double kTwoOverSqrtPi = 2.0 * kInvSqrtPi;
constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
// exp(709.78) is the largest representable exponential; keep one bit of headroom
// for the factor 2 in the reflection formula.
constexpr double kMaxExponent = 709.0;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210484904;

constexpr Complex kI{0.0, 1.0};

struct QuadrantValue {
    Complex w;
    bool has_remainder = false;
    Complex remainder;
};

// x >= 0, y >= 0.
//
// Three regions, following Gautschi's scheme as refined by Poppe & Wijers:
//   - near the origin, the power series of erfc(-iz);
//   - inside the ellipse (x/6.3)^2 + (y/4.4)^2 < 1, a shifted Laplace continued
//     fraction combined with a truncated Taylor sum;
//   - outside, the plain Laplace continued fraction, whose last step also
//     yields w(z) - i/(sqrt(pi) z) without cancellation.
QuadrantValue w_first_quadrant(double x, double y)
{
    const double xs = x / 6.3;
    const double ys = y / 4.4;
    const double rho2 = xs * xs + ys * ys;
    const Complex z{x, y};

    if (rho2 < 0.085264) {
        const double q = (1.0 - 0.85 * ys) * std::sqrt(rho2);
        const int n = static_cast<int>(std::lround(6.0 + 72.0 * q));
        const Complex z2 = z * z;
        Complex sum = 1.0 / (2.0 * n + 1.0);
        for (int i = n; i >= 1; --i)
            sum = sum * z2 / static_cast<double>(i) + 1.0 / (2.0 * i - 1.0);
        const Complex erfc_miz = 1.0 + kI * kTwoOverSqrtPi * z * sum;
        return {std::exp(-z2) * erfc_miz, false, {}};
    }

    double h = 0.0;
    int taylor_terms = 0;
    int fraction_terms = 0;
    if (rho2 > 1.0) {
        fraction_terms = static_cast<int>(3.0 + 1442.0 / (26.0 * std::sqrt(rho2) + 77.0));
    } else {
        const double q = (1.0 - ys) * std::sqrt(1.0 - rho2);
        h = 1.88 * q;
        taylor_terms = static_cast<int>(std::lround(7.0 + 34.0 * q));
        fraction_terms = static_cast<int>(std::lround(16.0 + 26.0 * q));
    }

    // h - i z
    const Complex shifted{h + y, -x};
    const double two_h = 2.0 * h;
    double lambda = h > 0.0 ? std::pow(two_h, taylor_terms) : 0.0;
    Complex r = 0.0;
    Complex r_next = 0.0;
    Complex s = 0.0;
    for (int n = fraction_terms; n >= 0; --n) {
        r_next = r;
        r = 0.5 / (shifted + static_cast<double>(n + 1) * r);
        if (h > 0.0 && n <= taylor_terms) {
            s = r * (lambda + s);
            lambda /= two_h;
        }
    }

    QuadrantValue out;
    if (h > 0.0) {
        out.w = kTwoOverSqrtPi * s;
    } else {
        out.w = kTwoOverSqrtPi * r;
        out.has_remainder = true;
        out.remainder = -kInvSqrtPi * r_next / (shifted * (shifted + r_next));
    }
    if (y == 0.0) {
        // The fraction is purely imaginary on the real axis.
        const double re = std::exp(-x * x);
        out.w.real(re);
        out.remainder.real(re);
    }
    return out;
}

void require_finite(Complex z, const char* what)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error(std::string(what) + ": non-finite argument");
}

Complex exp_checked(Complex z, const char* what)
{
    if (z.real() > kMaxExponent)
        throw OverflowRegime(std::string(what) + ": exponential factor overflows");
    return std::exp(z);
}

double sinc(double x)
{
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    }
    return std::sin(x) / x;
}

// integral_0^1 u^2 cos(x u) du
double second_cosine_moment(double x)
{
    if (std::abs(x) < 1.0) {
        const double x2 = x * x;
        double term = 1.0;
        double sum = 1.0 / 3.0;
        for (int n = 1; n <= 10; ++n) {
            term *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
            sum += term / (2.0 * n + 3.0);
        }
        return sum;
    }
    const double s = std::sin(x);
    const double c = std::cos(x);
    return (x * x * s + 2.0 * x * c - 2.0 * s) / (x * x * x);
}

double chirp_phase(double omega, double alpha, double t)
{
    return omega * t - 0.5 * alpha * t * t;
}

Complex unit_phase(double phase)
{
    return {std::cos(phase), std::sin(phase)};
}

// Two-term expansion in alpha about the midpoint of [t0, t1].
Complex chirp_small_alpha(double omega, double alpha, double t0, double t1)
{
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    const double local = omega - alpha * mid;
    const double x = local * half;
    const double even0 = 2.0 * half * sinc(x);
    const double even2 = 2.0 * half * half * half * second_cosine_moment(x);
    return unit_phase(chirp_phase(omega, alpha, mid)) * Complex{even0, -0.5 * alpha * even2};
}

// Pieces of the chirp antiderivative at t, in the representation whose
// Faddeeva argument lies in the upper half plane:
//   F(t) = exp(i phi(t)) * prefactor * w(arg).
struct ChirpEndpoint {
    int branch;  // +1 or -1
    Complex prefactor;
    Complex arg;
};

ChirpEndpoint chirp_endpoint(double omega, double alpha, double t)
{
    const double sigma = alpha > 0.0 ? 1.0 : -1.0;
    const double rate = omega - alpha * t;
    const int branch = (rate >= 0.0 ? 1 : -1) * static_cast<int>(sigma);
    const double scale = std::sqrt(2.0 * std::abs(alpha));
    const Complex eighth_turn = Complex{1.0, sigma} * kInvSqrt2;
    return {branch,
            static_cast<double>(branch) * kSqrtPi * std::conj(eighth_turn) / scale,
            kI * eighth_turn * (std::abs(rate) / scale)};
}

} // namespace

Complex faddeeva_w(Complex z)
{
    require_finite(z, "faddeeva_w");
    const double x = z.real();
    const double y = z.imag();
    if (y >= 0.0) {
        const Complex w = w_first_quadrant(std::abs(x), y).w;
        return x < 0.0 ? std::conj(w) : w;
    }
    const Complex reflected = 2.0 * exp_checked(-z * z, "faddeeva_w");
    return reflected - faddeeva_w(-z);
}

Complex faddeeva_w_remainder(Complex z)
{
    require_finite(z, "faddeeva_w_remainder");
    if (z.imag() < 0.0 || z == 0.0)
        throw std::domain_error("faddeeva_w_remainder: requires Im z >= 0 and z != 0");
    const double x = z.real();
    const Complex zq{std::abs(x), z.imag()};
    const QuadrantValue q = w_first_quadrant(zq.real(), zq.imag());
    const Complex rem = q.has_remainder ? q.remainder : q.w - kI * kInvSqrtPi / zq;
    return x < 0.0 ? std::conj(rem) : rem;
}

Complex erf_complex(Complex z)
{
    require_finite(z, "erf_complex");
    if (z.real() < 0.0)
        return -erf_complex(-z);
    if (std::abs(z) < 1.0) {
        // Maclaurin series; avoids the cancellation 1 - exp(-z^2) w(iz) near 0.
        const Complex z2 = z * z;
        Complex term = z;
        Complex sum = z;
        for (int n = 1; n < 40; ++n) {
            term *= -z2 / static_cast<double>(n);
            const Complex add = term / (2.0 * n + 1.0);
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum))
                break;
        }
        return kTwoOverSqrtPi * sum;
    }
    return 1.0 - exp_checked(-z * z, "erf_complex") * faddeeva_w(kI * z);
}

Complex chirp_segment(double omega, double alpha, double t0, double t1)
{
    if (!std::isfinite(omega) || !std::isfinite(alpha) || !std::isfinite(t0) || !std::isfinite(t1))
        throw std::domain_error("chirp_segment: non-finite argument");
    if (t1 < t0)
        throw std::invalid_argument("chirp_segment: requires t0 <= t1");
    if (t0 == t1)
        return 0.0;

    const double length = t1 - t0;
    if (std::abs(alpha) * length * length <= kChirpSmallAlpha)
        return chirp_small_alpha(omega, alpha, t0, t1);

    const ChirpEndpoint lo = chirp_endpoint(omega, alpha, t0);
    const ChirpEndpoint hi = chirp_endpoint(omega, alpha, t1);
    Complex value = unit_phase(chirp_phase(omega, alpha, t1)) * hi.prefactor * faddeeva_w(hi.arg)
                  - unit_phase(chirp_phase(omega, alpha, t0)) * lo.prefactor * faddeeva_w(lo.arg);
    if (lo.branch != hi.branch) {
        // The two representations differ by a constant; it only appears when the
        // stationary point omega / alpha lies inside [t0, t1].
        const double stationary = omega / alpha;
        const Complex offset = 2.0 * std::abs(hi.prefactor) * std::conj(Complex{1.0, alpha > 0 ? 1.0 : -1.0})
                             * kInvSqrt2 * unit_phase(chirp_phase(omega, alpha, stationary));
        value += 0.5 * static_cast<double>(lo.branch - hi.branch) * offset;
    }
    return value;
}

Complex chirp_remainder(double omega, double alpha, double t)
{
    if (alpha == 0.0)
        throw std::domain_error("chirp_remainder: alpha must be non-zero");
    if (omega - alpha * t == 0.0)
        throw std::domain_error("chirp_remainder: stationary point at t");
    const ChirpEndpoint e = chirp_endpoint(omega, alpha, t);
    return e.prefactor * faddeeva_w_remainder(e.arg);
}

} // namespace udw
