#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace longbond {

/// Per-path random substream. Path index and run seed are mixed through
/// SplitMix64 into an mt19937_64 seed, so path i's draws depend only on
/// (seed, i) and are unaffected by the total path count or evaluation order.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path_index)
        : engine_(mix(seed, path_index)) {}

    /// Uniform on the open interval (0, 1); safe under log.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(uniform()));
        const double angle = 2.0 * 3.14159265358979323846 * uniform();
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double exponential(double rate) {
        return -std::log(uniform()) / rate;
    }

    /// Poisson count by Knuth's product method, chunked so the threshold
    /// exp(-mean) never underflows.
    long poisson(double mean) {
        long total = 0;
        while (mean > 16.0) {
            total += poisson_small(16.0);
            mean -= 16.0;
        }
        return total + poisson_small(mean);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t path_index) {
        return splitmix64(splitmix64(seed) ^ splitmix64(path_index + 0x1000000000000001ULL));
    }

    long poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double threshold = std::exp(-mean);
        long count = -1;
        double product = 1.0;
        do {
            ++count;
            product *= uniform();
        } while (product > threshold);
        return count;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace longbond
