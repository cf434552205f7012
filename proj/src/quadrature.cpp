#include "udw/quadrature.hpp"

#include "udw/errors.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace udw {

void QuadratureConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("quadrature.") + name + " must be positive");
    };
    positive(rel_tol, "rel_tol");
    positive(abs_tol, "abs_tol");
    positive(k_cutoff_rel, "k_cutoff_rel");
    positive(mc_sigma_trunc, "mc_sigma_trunc");
    if (max_subdiv < 1)
        throw ConfigError("quadrature.max_subdiv must be >= 1");
    if (panels_per_period < 1)
        throw ConfigError("quadrature.panels_per_period must be >= 1");
    if (mc_samples < 1)
        throw ConfigError("quadrature.mc_samples must be >= 1");
}

QuadratureConfig QuadratureConfig::tightened(double factor) const
{
    QuadratureConfig c = *this;
    c.rel_tol *= factor;
    c.abs_tol *= factor;
    return c;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t s = seed;
    std::uint64_t key = splitmix64(s);
    std::uint64_t mixed = key ^ (index * 0xD1B54A32D192ED03ULL);
    state_ = splitmix64(mixed);
}

std::uint64_t CounterRng::next()
{
    return splitmix64(state_);
}

double CounterRng::uniform()
{
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

double wavepacket_axis_bound(double width_L, double sigma_trunc)
{
    return sigma_trunc * std::sqrt(2.0) / width_L;
}

double wavepacket_retained_mass(double sigma_trunc)
{
    // Per-axis deviation is 1/L, the bound is sigma_trunc sqrt(2) / L.
    const double per_axis = std::erf(sigma_trunc);
    return per_axis * per_axis * per_axis;
}

WavepacketSample sample_wavepacket(std::uint64_t seed, std::uint64_t index, double width_L,
                                   double sigma_trunc)
{
    CounterRng rng(seed, index);
    const double deviation = 1.0 / width_L;
    const double bound = wavepacket_axis_bound(width_L, sigma_trunc);
    WavepacketSample s{};
    for (double& component : s.p) {
        do {
            component = deviation * rng.normal();
        } while (std::abs(component) > bound);
    }
    s.aux_uniform = rng.uniform();
    return s;
}

double pairwise_sum(const double* data, std::size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

MonteCarloEstimate reduce_samples(const std::vector<double>& values)
{
    MonteCarloEstimate est;
    std::vector<double> kept;
    kept.reserve(values.size());
    for (double v : values) {
        if (std::isnan(v))
            ++est.rejected;
        else
            kept.push_back(v);
    }
    est.accepted = kept.size();
    if (kept.empty())
        return est;
    const double n = static_cast<double>(kept.size());
    est.mean = pairwise_sum(kept.data(), kept.size()) / n;
    if (kept.size() > 1) {
        for (double& v : kept)
            v = (v - est.mean) * (v - est.mean);
        const double variance = pairwise_sum(kept.data(), kept.size()) / (n - 1.0);
        est.std_error = std::sqrt(variance / n);
    }
    return est;
}

void evaluate_indexed(std::size_t n, unsigned workers, const std::function<double(std::size_t)>& sample_value,
                      std::vector<double>& out)
{
    out.assign(n, 0.0);
    const std::size_t count = std::max<std::size_t>(1, std::min<std::size_t>(workers, n));
    if (count == 1) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = sample_value(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t begin = w * n / count;
        const std::size_t end = (w + 1) * n / count;
        threads.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i)
                    out[i] = sample_value(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace udw
