// integer.hpp
// -----------------------------------------------------------------
// Arbitrary-precision integer alias and small modular helpers used
// throughout the library. All public arithmetic is exact; the u64
// fast paths exist only as an internal optimization for moduli that
// fit in a machine word.
// -----------------------------------------------------------------
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace polytower {

using Int = boost::multiprecision::cpp_int;

using boost::multiprecision::gcd;
using boost::multiprecision::lcm;
using boost::multiprecision::pow;

/// Reduction into [0, m). cpp_int's % keeps the dividend's sign.
inline Int mod_floor(const Int& x, const Int& m) {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
}

inline bool fits_u64(const Int& x) {
    return x >= 0 && x <= std::numeric_limits<std::uint64_t>::max();
}

inline std::uint64_t to_u64(const Int& x) {
    return x.convert_to<std::uint64_t>();
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t acc = 1 % m;
    base %= m;
    while (exp != 0) {
        if (exp & 1) acc = mulmod_u64(acc, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return acc;
}

/// base^exp mod m for non-negative exp, m >= 1.
inline Int powmod(const Int& base, const Int& exp, const Int& m) {
    if (m <= 0) throw std::domain_error("powmod: modulus must be positive");
    if (m == 1) return 0;
    if (exp < 0) throw std::domain_error("powmod: negative exponent");
    return boost::multiprecision::powm(mod_floor(base, m), exp, m);
}

}  // namespace polytower
