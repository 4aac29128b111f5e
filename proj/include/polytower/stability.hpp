// stability.hpp
// -----------------------------------------------------------------
// Tower-stability: a map is tower-stable when it is not a single
// p-cycle on Z/pZ for any prime p. A prime sweep alone can never
// certify "for all primes", so the report searches for an integer
// collision f(c) = f(c') (which kills injectivity, hence p-cycles,
// at every prime not dividing c - c') or an integer fixed point
// (which kills p-cycles everywhere). Also: valid / f-valid base
// predicates and the prime-product density constant.
// -----------------------------------------------------------------
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "integer.hpp"
#include "periods.hpp"
#include "polynomial.hpp"

namespace polytower {

/// True iff the reduction of f mod p is a single cyclic permutation of
/// length p.
inline bool is_p_cycle(const Polynomial& f, const Int& p,
                       std::uint64_t ceiling = kDefaultEnumerationCeiling) {
    if (!is_probable_prime(p)) throw std::domain_error("is_p_cycle: p must be prime");
    if (p > ceiling)
        throw budget_error("is_p_cycle: prime " + p.str() + " above enumeration ceiling");
    return detail::is_single_cycle_mod_p(f, to_u64(p));
}

struct PrimeVerdict {
    Int prime;
    bool p_cycle = false;

    bool operator==(const PrimeVerdict&) const = default;
};

enum class StabilityVerdict { stable_certified, stable_up_to_bound, unstable };

inline const char* to_label(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::stable_certified: return "stable-certified";
        case StabilityVerdict::stable_up_to_bound: return "stable-up-to-bound";
        case StabilityVerdict::unstable: return "unstable";
    }
    return "unknown";
}

struct StabilityReport {
    Polynomial map;
    std::uint64_t checked_prime_bound = 0;
    std::vector<PrimeVerdict> per_prime;
    std::optional<std::pair<Int, Int>> collision;  // (c, c') with f(c) == f(c'), c != c'
    std::optional<Int> fixed_point;                // c with f(c) == c
    StabilityVerdict verdict = StabilityVerdict::stable_up_to_bound;
    std::optional<Int> witness;                    // the unstable prime, when unstable

    bool operator==(const StabilityReport&) const = default;
};

/// Decide tower-stability. Certificates are searched over the window
/// c = 0, -1, 1, -2, 2, ..., +-search_bound; a fixed point certifies
/// stability outright, a collision leaves only the primes dividing
/// c - c' to test individually, and with no certificate the verdict is
/// honestly "stable-up-to-bound" after sweeping p <= prime_bound.
inline StabilityReport tower_stability_report(const Polynomial& f,
                                              std::uint64_t prime_bound = 1000,
                                              std::uint64_t search_bound = 1000) {
    StabilityReport report;
    report.map = f;
    report.checked_prime_bound = prime_bound;

    std::map<Int, Int> value_to_arg;
    auto probe = [&](const Int& c) {
        Int v = f(c);
        if (!report.fixed_point && v == c) report.fixed_point = c;
        if (!report.collision) {
            auto [it, inserted] = value_to_arg.emplace(v, c);
            if (!inserted) report.collision = std::make_pair(it->second, c);
        }
    };
    probe(0);
    for (Int c = 1; c <= search_bound && !(report.fixed_point && report.collision); ++c) {
        probe(-c);
        probe(c);
    }

    auto test_prime = [&](const Int& p) {
        bool cyc = is_p_cycle(f, p);
        report.per_prime.push_back({p, cyc});
        if (cyc && !report.witness) report.witness = p;
        return cyc;
    };

    if (report.fixed_point) {
        report.verdict = StabilityVerdict::stable_certified;
        return report;
    }
    if (report.collision) {
        Int d = report.collision->first - report.collision->second;
        if (d < 0) d = -d;
        bool bad = false;
        for (const auto& pp : factorize(d)) bad = test_prime(pp.prime) || bad;
        report.verdict = bad ? StabilityVerdict::unstable : StabilityVerdict::stable_certified;
        return report;
    }
    for (std::uint64_t p : primes_up_to(prime_bound)) {
        if (test_prime(Int(p))) {
            report.verdict = StabilityVerdict::unstable;
            return report;
        }
    }
    report.verdict = StabilityVerdict::stable_up_to_bound;
    return report;
}

/// A base is valid when for every prime p | b, every prime q | p - 1
/// also divides b.
inline bool is_valid_base(const Int& b) {
    if (b <= 0) throw std::domain_error("is_valid_base: base must be positive");
    for (const auto& pp : factorize(b))
        for (const auto& qq : factorize(pp.prime - 1))
            if (b % qq.prime != 0) return false;
    return true;
}

/// f-valid: square-free, valid, and closed under the primes of
/// lambda(p) for every p | b. Requires f tower-stable at each p | b.
inline bool is_f_valid_base(const Polynomial& f, const Int& b,
                            std::uint64_t ceiling = kDefaultEnumerationCeiling) {
    if (b <= 0) throw std::domain_error("is_f_valid_base: base must be positive");
    Factorization fact = factorize(b);
    if (!is_square_free(fact)) return false;
    if (!is_valid_base(b)) return false;
    for (const auto& pp : fact) {
        if (is_p_cycle(f, pp.prime, ceiling))
            throw unstable_error("is_f_valid_base: map is a single " + pp.prime.str() +
                                     "-cycle mod " + pp.prime.str(),
                                 pp.prime);
        Int lam = lambda_exact(f, pp.prime, ceiling).period_multiple;
        for (const auto& qq : factorize(lam))
            if (b % qq.prime != 0) return false;
    }
    return true;
}

/// Partial product over primes p <= prime_bound of (1 - (p-1)!/p^p).
/// Each factor's small term is built as prod_{j<p} (j/p) * (1/p) so
/// nothing overflows. Non-increasing in the bound.
inline double ctow_partial(std::uint64_t prime_bound) {
    if (prime_bound < 2) throw std::domain_error("ctow_partial: bound must be at least 2");
    double product = 1.0;
    for (std::uint64_t p : primes_up_to(prime_bound)) {
        double term = 1.0 / static_cast<double>(p);
        for (std::uint64_t j = 1; j < p; ++j)
            term *= static_cast<double>(j) / static_cast<double>(p);
        product *= 1.0 - term;
    }
    return product;
}

}  // namespace polytower
