#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace qmc {

/// Thrown when requested parameters fall outside the supported regime
/// (e.g. s > q, or interpolation degrees colliding with the field size).
class RegimeError : public std::runtime_error {
   public:
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed input files or strings.
class ParseError : public std::runtime_error {
   public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Exact binomial coefficient; throws on overflow of uint64.
inline uint64_t binomial(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    uint64_t r = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        uint64_t num = n - k + i;
        uint64_t g = std::gcd(num, i);
        num /= g;
        uint64_t den = i / g;
        if (r % den != 0) {
            // split the division across the accumulated product
            uint64_t g2 = std::gcd(r, den);
            r /= g2;
            den /= g2;
            if (den != 1) throw std::overflow_error("binomial: non-exact intermediate");
        } else {
            r /= den;
        }
        if (num != 0 && r > UINT64_MAX / num) throw std::overflow_error("binomial: overflow");
        r *= num;
    }
    return r;
}

/// Reduced fraction with int64 parts.  Only used for reporting rates and
/// distances; never for field arithmetic.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n, int64_t d) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

/// Deterministic PRNG.  mt19937_64 output is pinned by the standard; the
/// bounded draw below avoids std::uniform_int_distribution, whose mapping is
/// implementation-defined.
class Rng {
   public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    /// Uniform draw from [0, n) by rejection.
    uint64_t below(uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

   private:
    std::mt19937_64 eng_;
};

}  // namespace qmc
