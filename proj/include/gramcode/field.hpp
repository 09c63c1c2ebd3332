#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "gramcode/errors.hpp"

namespace gramcode {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace detail

/// Deterministic Miller-Rabin for 64-bit integers (the listed bases are a
/// known complete witness set for this range).
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Default modulus: the Mersenne prime 2^61 - 1. Fits comfortably in 64-bit
/// words with 128-bit intermediate products.
inline constexpr std::uint64_t kDefaultModulus = (1ULL << 61) - 1;

/// Arithmetic context for a prime field F_q with a runtime modulus.
///
/// Elements are plain uint64_t values in [0, q); the modulus lives here, not
/// in the elements. The modulus is validated for primality on construction.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t q = kDefaultModulus) : q_(q) {
        if (q < 2 || !is_prime_u64(q))
            throw InvalidModulus("modulus " + std::to_string(q) + " is not prime");
        if (q >= (1ULL << 62))
            throw InvalidModulus("modulus must be below 2^62");
    }

    std::uint64_t modulus() const { return q_; }

    std::uint64_t reduce(std::uint64_t v) const { return v % q_; }

    /// Reduce a signed integer into [0, q).
    std::uint64_t from_int(std::int64_t v) const {
        std::int64_t m = static_cast<std::int64_t>(q_);
        std::int64_t r = v % m;
        if (r < 0) r += m;
        return static_cast<std::uint64_t>(r);
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        if (s >= q_) s -= q_;
        return s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : q_ - a; }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return detail::mulmod_u64(a, b, q_);
    }

    /// a^e with a nonnegative integer exponent; pow(0, 0) = 1.
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        return detail::powmod_u64(a, e, q_);
    }

    /// Multiplicative inverse via Fermat; defined only for nonzero elements.
    std::uint64_t inv(std::uint64_t a) const {
        if (a % q_ == 0) throw DivisionByZero();
        return pow(a, q_ - 2);
    }

    bool operator==(const PrimeField& other) const { return q_ == other.q_; }
    bool operator!=(const PrimeField& other) const { return q_ != other.q_; }

private:
    std::uint64_t q_;
};

/// Uniform draw from [0, q) by rejection, so results are identical across
/// platforms for a given mt19937_64 stream.
inline std::uint64_t uniform_field_element(std::mt19937_64& rng, std::uint64_t q) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % q;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % q;
}

/// Uniform draw from the unit group F_q^x = F_q \ {0}.
inline std::uint64_t uniform_nonzero_element(std::mt19937_64& rng, std::uint64_t q) {
    return 1 + uniform_field_element(rng, q - 1);
}

} // namespace gramcode
