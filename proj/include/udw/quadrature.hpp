#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

namespace udw {

using Vec3 = std::array<double, 3>;

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    std::size_t max_subdiv = 20000;
    std::size_t panels_per_period = 8;
    double k_cutoff_rel = 1e-6;
    std::size_t mc_samples = 200000;
    std::uint64_t mc_seed = 0x5eed5eedULL;
    double mc_sigma_trunc = 3.5;

    /// Throws ConfigError when a tolerance or count is out of range.
    void validate() const;

    /// Copy with rel_tol and abs_tol scaled by `factor` (used for nested rules).
    [[nodiscard]] QuadratureConfig tightened(double factor) const;
};

struct IntegralEstimate {
    double value = 0.0;
    double est_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

struct ComplexIntegralEstimate {
    std::complex<double> value;
    double est_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class Value>
double magnitude(const Value& v)
{
    return std::abs(v);
}

template <class Value>
struct Panel {
    double lo;
    double hi;
    Value value;
    double error;
    double floor;  // rounding level of the panel, 50 eps * integral of |f|
};

template <class Value, class F>
Panel<Value> gauss_kronrod_panel(F& f, double lo, double hi)
{
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const Value fc = f(centre);
    Value kronrod = kKronrodWeights[7] * fc;
    Value gauss = kGaussWeights[3] * fc;
    double abs_sum = kKronrodWeights[7] * magnitude(fc);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const Value left = f(centre - dx);
        const Value right = f(centre + dx);
        const Value pair = left + right;
        kronrod += kKronrodWeights[j] * pair;
        abs_sum += kKronrodWeights[j] * (magnitude(left) + magnitude(right));
        if (j % 2 == 1)
            gauss += kGaussWeights[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * half * abs_sum;
    return {lo, hi, kronrod, std::max(magnitude(kronrod - gauss), floor), floor};
}

template <class Value>
struct AdaptiveResult {
    Value value{};
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Adaptive Gauss-Kronrod 7/15 on [lo, hi], bisecting the panel with the largest
/// |K15 - G7| until the summed error meets max(abs_tol, rel_tol |I|).
/// Panels are no wider than `max_panel` initially. Refinement also stops once
/// every panel's estimate is at its rounding floor (nothing left to gain in
/// double precision); that counts as converged. Deterministic: the refinement
/// order depends only on the integrand values.
template <class Value, class F>
AdaptiveResult<Value> adaptive_gauss_kronrod(F&& f, double lo, double hi, double max_panel,
                                             double rel_tol, double abs_tol, std::size_t max_subdiv)
{
    AdaptiveResult<Value> out;
    if (!(hi > lo))
        return out;
    std::size_t initial = 1;
    if (max_panel > 0.0 && std::isfinite(max_panel))
        initial = static_cast<std::size_t>(std::ceil((hi - lo) / max_panel));
    initial = std::clamp<std::size_t>(initial, 1, std::max<std::size_t>(max_subdiv, 1));

    auto by_error = [](const Panel<Value>& a, const Panel<Value>& b) {
        if (a.error != b.error)
            return a.error < b.error;
        return a.lo > b.lo;
    };
    std::priority_queue<Panel<Value>, std::vector<Panel<Value>>, decltype(by_error)> queue(by_error);

    Value total{};
    double error = 0.0;
    double floor = 0.0;
    const double width = (hi - lo) / static_cast<double>(initial);
    for (std::size_t i = 0; i < initial; ++i) {
        const double a = lo + width * static_cast<double>(i);
        const double b = i + 1 == initial ? hi : lo + width * static_cast<double>(i + 1);
        Panel<Value> p = gauss_kronrod_panel<Value>(f, a, b);
        total += p.value;
        error += p.error;
        floor += p.floor;
        queue.push(std::move(p));
    }
    out.evaluations = 15 * initial;

    std::size_t panels = initial;
    auto tolerance = [&] { return std::max({abs_tol, rel_tol * magnitude(total), floor * (1.0 + 1e-9)}); };
    while (error > tolerance()) {
        if (panels >= max_subdiv) {
            out.converged = false;
            break;
        }
        Panel<Value> worst = queue.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // Panel cannot be split further in double precision.
            out.converged = false;
            break;
        }
        queue.pop();
        Panel<Value> left = gauss_kronrod_panel<Value>(f, worst.lo, mid);
        Panel<Value> right = gauss_kronrod_panel<Value>(f, mid, worst.hi);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        queue.push(std::move(left));
        queue.push(std::move(right));
        ++panels;
    }

    // Re-sum from the panels in position order so the result does not depend
    // on the accumulated rounding of the running totals.
    std::vector<Panel<Value>> all;
    all.reserve(queue.size());
    while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
    Value sum{};
    double err = 0.0;
    double err_floor = 0.0;
    for (const auto& p : all) {
        sum += p.value;
        err += p.error;
        err_floor += p.floor;
    }
    out.value = sum;
    out.error = err;
    if (out.converged)
        out.converged = err <= std::max({abs_tol, rel_tol * magnitude(sum), err_floor * (1.0 + 1e-9)});
    return out;
}

inline double panel_cap(double frequency, std::size_t panels_per_period)
{
    if (!(frequency > 0.0) || !std::isfinite(frequency))
        return 0.0;
    return 2.0 * 3.14159265358979323846 / frequency / static_cast<double>(panels_per_period);
}

} // namespace detail

/// Adaptive integral of a real function on [lo, hi].
///
/// `frequency_hint(lo, hi)` returns an upper bound on the local angular
/// frequency of the integrand on [lo, hi] (0 for none); initial panels are capped
/// at one `panels_per_period`-th of the corresponding period.
/// Returns converged = false when max_subdiv is reached; the estimate is still the
/// best available.
template <class F, class Hint>
IntegralEstimate integrate_1d(F&& f, double lo, double hi, Hint&& frequency_hint,
                              const QuadratureConfig& cfg)
{
    const double cap = detail::panel_cap(frequency_hint(lo, hi), cfg.panels_per_period);
    auto r = detail::adaptive_gauss_kronrod<double>(std::forward<F>(f), lo, hi, cap, cfg.rel_tol,
                                                    cfg.abs_tol, cfg.max_subdiv);
    return {r.value, r.error, r.evaluations, r.converged};
}

template <class F>
IntegralEstimate integrate_1d(F&& f, double lo, double hi, const QuadratureConfig& cfg)
{
    return integrate_1d(std::forward<F>(f), lo, hi, [](double, double) { return 0.0; }, cfg);
}

/// Complex-valued counterpart of integrate_1d.
template <class F, class Hint>
ComplexIntegralEstimate integrate_1d_complex(F&& f, double lo, double hi, Hint&& frequency_hint,
                                             const QuadratureConfig& cfg)
{
    const double cap = detail::panel_cap(frequency_hint(lo, hi), cfg.panels_per_period);
    auto r = detail::adaptive_gauss_kronrod<std::complex<double>>(
        std::forward<F>(f), lo, hi, cap, cfg.rel_tol, cfg.abs_tol, cfg.max_subdiv);
    return {r.value, r.error, r.evaluations, r.converged};
}

/// Integral over [0, inf) of a non-negative function of momentum k.
///
/// Integrates on [0, K], [K, 2K], [2K, 4K], ... and stops once the latest
/// window contributes less than k_cutoff_rel of the running total. The last
/// window's contribution is added to est_error as the tail bound. Not converged
/// when the cutoff is not reached within 20 doublings or any window fails.
template <class F, class Hint>
IntegralEstimate integrate_semi_infinite_k(F&& f, double initial_window, Hint&& frequency_hint,
                                           const QuadratureConfig& cfg)
{
    constexpr int kMaxDoublings = 20;
    IntegralEstimate total;
    double lo = 0.0;
    double hi = initial_window;
    bool cutoff_reached = false;
    for (int i = 0; i <= kMaxDoublings; ++i) {
        const IntegralEstimate window = integrate_1d(f, lo, hi, frequency_hint, cfg);
        total.value += window.value;
        total.est_error += window.est_error;
        total.evaluations += window.evaluations;
        total.converged = total.converged && window.converged;
        if (std::abs(window.value) <= cfg.k_cutoff_rel * std::abs(total.value)
            || (total.value == 0.0 && window.value == 0.0)) {
            total.est_error += std::abs(window.value);
            cutoff_reached = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    total.converged = total.converged && cutoff_reached;
    return total;
}

template <class F>
IntegralEstimate integrate_semi_infinite_k(F&& f, double initial_window, const QuadratureConfig& cfg)
{
    return integrate_semi_infinite_k(std::forward<F>(f), initial_window,
                                     [](double, double) { return 0.0; }, cfg);
}

/// Counter-based generator: the stream for (seed, index) is independent of any
/// other index, so samples can be drawn in any order or on any thread.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next();
    /// Uniform on (0, 1).
    double uniform();
    /// Standard normal (Box-Muller).
    double normal();

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// One draw from |phi(p)|^2 proportional to exp(-p^2 L^2 / 2), truncated per axis
/// at |p_axis| <= sigma_trunc * sqrt(2) / L, plus an independent uniform on (0, 1)
/// for callers needing an extra angle.
struct WavepacketSample {
    Vec3 p;
    double aux_uniform;
};

WavepacketSample sample_wavepacket(std::uint64_t seed, std::uint64_t index, double width_L,
                                   double sigma_trunc);

/// Half-width of the per-axis momentum truncation window.
double wavepacket_axis_bound(double width_L, double sigma_trunc);

/// Probability mass of the untruncated wavepacket inside the truncation cube.
double wavepacket_retained_mass(double sigma_trunc);

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(const double* data, std::size_t n);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;

    [[nodiscard]] double rejection_fraction() const
    {
        const std::size_t n = accepted + rejected;
        return n == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(n);
    }
};

/// Reduce per-sample values (NaN marks a rejected sample) to mean and standard error.
MonteCarloEstimate reduce_samples(const std::vector<double>& values);

/// Evaluate `sample_value(i)` for i in [0, n) on `workers` threads with a static
/// partition, storing by index.
void evaluate_indexed(std::size_t n, unsigned workers, const std::function<double(std::size_t)>& sample_value,
                      std::vector<double>& out);

/// Monte Carlo mean of g(p) with p drawn from the truncated Gaussian wavepacket.
///
/// g may take (const Vec3&) or (const Vec3&, double aux_uniform). It may return
/// NaN to reject a sample; rejected samples are counted and excluded. The result
/// is bit-identical for a fixed seed whatever the worker count.
template <class G>
MonteCarloEstimate mc_gaussian_expectation(G&& g, double width_L, const QuadratureConfig& cfg,
                                           unsigned workers = 1)
{
    std::vector<double> values;
    const double trunc = cfg.mc_sigma_trunc;
    const std::uint64_t seed = cfg.mc_seed;
    evaluate_indexed(cfg.mc_samples, workers,
                     [&](std::size_t i) {
                         const WavepacketSample s = sample_wavepacket(seed, i, width_L, trunc);
                         if constexpr (std::is_invocable_v<G&, const Vec3&, double>)
                             return static_cast<double>(g(s.p, s.aux_uniform));
                         else
                             return static_cast<double>(g(s.p));
                     },
                     values);
    return reduce_samples(values);
}

} // namespace udw
