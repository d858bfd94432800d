#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sysid {

namespace detail {
// splitmix64 finalizer; used only for key mixing, never as the stream itself.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Seeded random stream with splittable substreams keyed by
/// (master seed, trial index, purpose tag). The engine is std::mt19937_64,
/// whose output sequence is fixed by the standard, and all distributions are
/// implemented locally, so identical seeds give identical draws on every
/// platform. Single-owner mutable; parallel work takes distinct substreams.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    static RngStream keyed(std::uint64_t master, std::uint64_t trial, std::uint64_t tag) {
        std::uint64_t s = detail::mix64(master);
        s = detail::mix64(s ^ detail::mix64(trial + 0x632be59bd9b4e019ULL));
        s = detail::mix64(s ^ detail::mix64(tag + 0x2545f4914f6cdd1dULL));
        return RngStream(s);
    }

    /// Derived stream; advances this stream by one draw.
    RngStream substream(std::uint64_t tag) {
        return RngStream(detail::mix64(next_u64() ^ detail::mix64(tag)));
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Box-Muller; one spare value cached.
    double normal(double mean = 0.0, double stddev = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1, u2;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return mean + stddev * r * std::cos(theta);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace sysid
