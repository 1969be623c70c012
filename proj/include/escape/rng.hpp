#pragma once
#include <cmath>
#include <cstdint>

namespace escape {

// splitmix64 mixing step (Vigna / Steele-Lea-Flood).  Used both as the
// per-stream generator and to derive independent stream states from a
// (master seed, stream index) pair, so streams are counter-based: the
// state of stream k never depends on how many draws other streams made.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// One RNG stream, derived from (seed, stream_index).  Deterministic and
// independent of any other stream; safe to create in any order.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_index, double gauss_sign = 1.0)
        : gauss_sign_(gauss_sign) {
        // Two mixing rounds decorrelate (seed, index) pairs.
        std::uint64_t s = seed;
        std::uint64_t a = splitmix64_next(s);
        s = a ^ (stream_index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
        (void)splitmix64_next(s);
        state_ = splitmix64_next(s);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential() { return -std::log(uniform()); }

    // Standard normal via the Marsaglia polar method.  The cached spare
    // keeps draws per stream sequential and reproducible.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return gauss_sign_ * spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return gauss_sign_ * u * m;
    }

  private:
    std::uint64_t state_;
    double gauss_sign_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace escape
