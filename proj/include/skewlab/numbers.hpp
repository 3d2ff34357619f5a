#ifndef SKEWLAB_NUMBERS_HPP
#define SKEWLAB_NUMBERS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace skewlab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }

inline int64_t mod_pos(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline int64_t pow_i64(int64_t base, int64_t e) {
    int64_t r = 1;
    for (int64_t i = 0; i < e; ++i) r *= base;
    return r;
}

// Euler phi by trial division; conductors here are tiny.
inline int64_t euler_phi(int64_t m) {
    int64_t result = m;
    int64_t n = m;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

inline bool is_prime_i64(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Deterministic splitmix64 stream; rngs are forked per suite/per check so
// record output is reproducible byte for byte under a fixed seed.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n > 0 (modulo bias is irrelevant for test sampling)
    uint64_t below(uint64_t n) { return next() % n; }

    int64_t range(int64_t lo, int64_t hi) {  // inclusive bounds
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    Rng fork(uint64_t stream) const {
        Rng r(state_ ^ (0x5851f42d4c957f2dULL * (stream + 1)));
        r.next();
        return r;
    }

  private:
    uint64_t state_;
};

inline std::string rational_str(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

}  // namespace skewlab

#endif
