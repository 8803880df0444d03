#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "dynres/errors.hpp"

namespace dynres {

/// Exact arbitrary-precision rational. mpq_class keeps values reduced with
/// positive denominator once canonicalized; every entry point that builds a
/// value from raw parts canonicalizes.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parse "num", "num/den" (arbitrary precision, optional sign).
inline Rat rat_parse(const std::string& s) {
    try {
        Rat q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ValidationError("not a rational: '" + s + "'");
    }
}

/// Canonical string form: "5", "-3/2".
inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

/// Reduce q modulo a prime p, returning a representative in [0, p).
/// Throws BadReductionError when the denominator vanishes mod p.
inline std::int64_t mod_p(const Rat& q, std::int64_t p) {
    std::int64_t num = static_cast<std::int64_t>(
        mpz_fdiv_ui(q.get_num().get_mpz_t(), static_cast<unsigned long>(p)));
    std::int64_t den = static_cast<std::int64_t>(
        mpz_fdiv_ui(q.get_den().get_mpz_t(), static_cast<unsigned long>(p)));
    if (den == 0)
        throw BadReductionError("denominator divisible by prime " + std::to_string(p));
    // den^(p-2) mod p by binary exponentiation (p prime).
    std::int64_t inv = 1, base = den % p, e = p - 2;
    while (e > 0) {
        if (e & 1) inv = (inv * base) % p;
        base = (base * base) % p;
        e >>= 1;
    }
    return (num % p) * inv % p;
}

/// Exact n! as a rational (used by the exponential series).
inline Rat factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rat(f);
}

}  // namespace dynres
