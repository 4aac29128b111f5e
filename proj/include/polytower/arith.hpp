// arith.hpp
// -----------------------------------------------------------------
// Integer utilities: trial-division factorization, Miller-Rabin,
// the largest-prime-power function alpha, lcm helpers and a small
// prime sieve.
// -----------------------------------------------------------------
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "integer.hpp"

namespace polytower {

struct PrimePower {
    Int prime;
    unsigned exponent = 1;
    bool operator==(const PrimePower&) const = default;
};

/// Ascending prime powers whose product reconstructs the input; empty for 1.
using Factorization = std::vector<PrimePower>;

/// Strong-probable-prime test. Deterministic for n < 3.3e24 (first 13
/// prime bases); probabilistic but extremely reliable above that.
inline bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    unsigned r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (unsigned a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
        Int x = powmod(Int(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned i = 1; i < r; ++i) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline constexpr std::uint64_t kDefaultTrialLimit = 1ull << 32;

/// Exact factorization by wheel trial division. Succeeds for any n whose
/// second-largest prime factor is below trial_limit (covers all n < 2^64
/// at the default) and for larger smooth inputs; otherwise reports the
/// stubborn cofactor instead of guessing.
inline Factorization factorize(const Int& n, std::uint64_t trial_limit = kDefaultTrialLimit) {
    if (n <= 0) throw std::domain_error("factorize: argument must be positive");
    Factorization out;
    Int rem = n;
    auto strip = [&](const Int& p) {
        unsigned e = 0;
        while (rem % p == 0) {
            rem /= p;
            ++e;
        }
        if (e > 0) out.push_back({p, e});
    };
    strip(2);
    strip(3);
    strip(5);
    static constexpr unsigned wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    Int d = 7;
    std::size_t w = 0;
    while (d <= trial_limit && d * d <= rem) {
        strip(d);
        d += wheel[w];
        w = (w + 1) & 7;
    }
    if (rem > 1) {
        if (d * d > rem || is_probable_prime(rem)) {
            out.push_back({rem, 1});
        } else {
            throw budget_error("factorize: composite cofactor " + rem.str() +
                               " exceeds the trial-division ceiling");
        }
    }
    return out;
}

inline Int factorization_value(const Factorization& f) {
    Int v = 1;
    for (const auto& pp : f) v *= pow(pp.prime, pp.exponent);
    return v;
}

inline bool is_square_free(const Factorization& f) {
    return std::all_of(f.begin(), f.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

/// alpha(n): the largest prime power dividing n; alpha(1) = 1.
inline Int alpha(const Int& n) {
    Int best = 1;
    for (const auto& pp : factorize(n)) {
        Int q = pow(pp.prime, pp.exponent);
        if (q > best) best = q;
    }
    return best;
}

/// Exact lcm of a non-empty list.
inline Int lcm_all(const std::vector<Int>& values) {
    if (values.empty()) throw std::domain_error("lcm_all: empty list");
    Int acc = 1;
    for (const Int& v : values) {
        if (v <= 0) throw std::domain_error("lcm_all: values must be positive");
        acc = lcm(acc, v);
    }
    return acc;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    std::vector<bool> sieve(n + 1, true);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) sieve[j] = false;
    }
    return out;
}

/// lcm{1, 2, ..., n} ("lcm[n]").
inline Int lcm_upto(std::uint64_t n) {
    Int acc = 1;
    for (std::uint64_t p : primes_up_to(n)) {
        Int q = p;
        while (q * p <= n) q *= p;
        acc *= q;
    }
    return acc;
}

}  // namespace polytower
