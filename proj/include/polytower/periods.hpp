// periods.hpp
// -----------------------------------------------------------------
// The period map of a polynomial on residue rings.
//
// lambda(m) is the period of the induced map on Z/mZ (lcm of all
// cycle lengths); the per-start variant lambda_a(m) is the cycle
// length of one orbit. Exact values come from enumeration. Above the
// enumeration ceiling a certificate carries a proven multiple:
// either the mod-p-multiplier lift (start-specific) or the coarse
// lcm{1..p}-power chain (global), and certificates combine across
// coprime parts by lcm.
// -----------------------------------------------------------------
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "integer.hpp"
#include "polynomial.hpp"

namespace polytower {

enum class Provenance {
    enumeration,       // exact, from full or single-orbit enumeration
    multiplier_lift,   // prime-power lift driven by the mod-p multiplier
    crt_combine,       // lcm of coprime-part certificates
    lcm_power_chain,   // coarse lambda(p^(a+1)) | lcm[p] * lambda(p^a) chain
    linear_closed_form  // affine map bound, no orbit materialized
};

inline const char* to_label(Provenance p) {
    switch (p) {
        case Provenance::enumeration: return "enumeration";
        case Provenance::multiplier_lift: return "multiplier-lift";
        case Provenance::crt_combine: return "crt-combine";
        case Provenance::lcm_power_chain: return "lcm-power-chain";
        case Provenance::linear_closed_form: return "linear-closed-form";
    }
    return "unknown";
}

/// A modulus together with a proven period datum. When exact is true,
/// period_multiple equals the period (global, or of start's orbit when
/// start is set); otherwise the true period divides it. tail_bound
/// always dominates the corresponding preperiod/tail.
struct PeriodCertificate {
    Int modulus;
    Int period_multiple;  // Lambda
    bool exact = false;
    Int tail_bound;       // Theta
    Provenance provenance = Provenance::enumeration;
    std::optional<Int> start;  // set for start-specific certificates

    bool operator==(const PeriodCertificate&) const = default;
};

/// Exact lambda(m) and preperiod by enumeration; m below the ceiling.
inline PeriodCertificate lambda_exact(const Polynomial& f, const Int& m,
                                      std::uint64_t ceiling = kDefaultEnumerationCeiling) {
    GraphSummary g = analyze_map(f, m, ceiling);
    PeriodCertificate cert;
    cert.modulus = m;
    cert.period_multiple = g.period;
    cert.exact = true;
    cert.tail_bound = Int(g.preperiod);
    cert.provenance = Provenance::enumeration;
    return cert;
}

/// The mod-p multiplier of f on a: the product of f' over one pass
/// around a's mod-p cycle. Its vanishing mod p decides whether tails
/// or periods grow when the modulus is raised from p to p^k.
struct Multiplier {
    Int prime;
    Int start;
    std::uint64_t tail_p = 0;   // tail of a's orbit mod p
    std::uint64_t cycle_p = 1;  // cycle of a's orbit mod p
    Int value;                  // in [0, p)

    bool operator==(const Multiplier&) const = default;
};

inline Multiplier multiplier(const Polynomial& f, const Int& a, const Int& p) {
    if (!is_probable_prime(p)) throw std::domain_error("multiplier: p must be prime");
    OrbitShape shape = orbit_shape(f, a, p);
    Multiplier mu;
    mu.prime = p;
    mu.start = a;
    mu.tail_p = shape.tail;
    mu.cycle_p = shape.cycle;
    Polynomial df = derivative(f);
    ModEvaluator feval(f, p);
    ModEvaluator dfeval(df, p);
    Int v = shape.entry_value;
    Int prod = 1;
    for (std::uint64_t i = 0; i < shape.cycle; ++i) {
        prod = mod_floor(prod * dfeval.eval(v), p);
        v = feval.eval(v);
    }
    mu.value = prod;
    return mu;
}

/// Start-specific certificate for a's orbit mod p^k from mod-p data.
/// multiplier == 0 (mod p): the cycle is exactly the mod-p cycle and
/// only the tail can grow, by at most cycle_p per extra power.
/// multiplier != 0: the tail is exactly the mod-p tail and the cycle
/// divides cycle_p * (p-1) * p^(k-1).
inline PeriodCertificate lift_prime_power(const Polynomial& f, const Int& a, const Int& p,
                                          unsigned k) {
    if (k == 0) throw std::domain_error("lift_prime_power: k must be positive");
    Multiplier mu = multiplier(f, a, p);
    PeriodCertificate cert;
    cert.modulus = pow(p, k);
    cert.start = a;
    if (k == 1) {
        cert.period_multiple = Int(mu.cycle_p);
        cert.exact = true;
        cert.tail_bound = Int(mu.tail_p);
        cert.provenance = Provenance::enumeration;
        return cert;
    }
    cert.provenance = Provenance::multiplier_lift;
    if (mu.value == 0) {
        cert.period_multiple = Int(mu.cycle_p);
        cert.exact = true;
        cert.tail_bound = Int(mu.tail_p) + Int(k - 1) * mu.cycle_p;
    } else {
        cert.period_multiple = Int(mu.cycle_p) * (p - 1) * pow(p, k - 1);
        cert.exact = false;
        cert.tail_bound = Int(mu.tail_p);
    }
    return cert;
}

namespace detail {

/// Certificate for the orbit of a under an affine map b*x + c modulo
/// p^k, without materializing the orbit. p | b contracts the p-part to
/// a fixed value within ceil(k / v_p(b)) steps; otherwise the map is a
/// bijection mod p^k and the mod-p cycle lifts with the (p-1)*p^(k-1)
/// factor (the multiplier b^cycle is a unit).
inline PeriodCertificate affine_prime_power_certificate(const Polynomial& f, const Int& a,
                                                        const Int& p, unsigned k,
                                                        std::uint64_t orbit_budget) {
    if (f.degree() > 1)
        throw std::invalid_argument("affine certificate requires a degree <= 1 polynomial");
    const auto& co = f.coefficients();
    const Int bcoef = co.size() > 1 ? co[1] : Int(0);
    PeriodCertificate cert;
    cert.modulus = pow(p, k);
    cert.start = a;
    cert.provenance = Provenance::linear_closed_form;
    if (bcoef != 0 && bcoef % p == 0) {
        unsigned v = 0;
        Int b = bcoef;
        while (b % p == 0) {
            b /= p;
            ++v;
        }
        cert.period_multiple = 1;
        cert.exact = true;
        cert.tail_bound = Int((k + v - 1) / v);
        return cert;
    }
    if (bcoef == 0) {
        // Constant map: everything lands on c after one step.
        cert.period_multiple = 1;
        cert.exact = true;
        cert.tail_bound = 1;
        return cert;
    }
    if (p > orbit_budget)
        throw budget_error("affine certificate: prime " + p.str() + " exceeds the orbit budget");
    OrbitShape sh = orbit_shape(f, a, p, orbit_budget);
    cert.tail_bound = Int(sh.tail);
    if (k == 1) {
        cert.period_multiple = Int(sh.cycle);
        cert.exact = true;
    } else {
        cert.period_multiple = Int(sh.cycle) * (p - 1) * pow(p, k - 1);
        cert.exact = false;
    }
    return cert;
}

/// Certificate for one prime power, exact when enumerable.
inline PeriodCertificate prime_power_certificate(const Polynomial& f, const Int& p, unsigned k,
                                                 const std::optional<Int>& start,
                                                 std::uint64_t ceiling) {
    Int q = pow(p, k);
    if (q <= ceiling) return lambda_exact(f, q, ceiling);
    if (start) {
        if (f.degree() <= 1)
            return affine_prime_power_certificate(f, *start, p, k, kDefaultOrbitBudget);
        return lift_prime_power(f, *start, p, k);
    }
    if (p > ceiling)
        throw budget_error("period certificate: prime " + p.str() +
                           " above the enumeration ceiling and no start point given");
    // Climb from the largest enumerable power p^j: each extra power
    // multiplies the period bound by lcm{1..p} and pushes the tail
    // bound by p cycle lengths.
    unsigned j = 1;
    Int pj = p;
    while (pj * p <= ceiling) {
        pj *= p;
        ++j;
    }
    GraphSummary base = analyze_map(f, pj, ceiling);
    Int lam = base.period;
    Int theta = Int(base.preperiod);
    Int lcm_p = lcm_upto(to_u64(p));
    for (unsigned level = j; level < k; ++level) {
        theta += lam * p;
        lam *= lcm_p;
    }
    PeriodCertificate cert;
    cert.modulus = q;
    cert.period_multiple = lam;
    cert.exact = false;
    cert.tail_bound = theta;
    cert.provenance = Provenance::lcm_power_chain;
    return cert;
}

}  // namespace detail

/// Factor m, certify each prime power (enumeration when small, the
/// start-specific lift or the lcm-power chain above the ceiling), and
/// combine by lcm. Exact iff every part is exact and all parts share
/// one scope (all global, or all specific to the same start).
inline PeriodCertificate lambda_multiple(const Polynomial& f, const Int& m,
                                         const std::optional<Int>& start = std::nullopt,
                                         std::uint64_t ceiling = kDefaultEnumerationCeiling) {
    if (m <= 0) throw std::domain_error("lambda_multiple: modulus must be positive");
    Factorization fact = factorize(m);
    if (fact.empty()) {
        PeriodCertificate cert;
        cert.modulus = 1;
        cert.period_multiple = 1;
        cert.exact = true;
        cert.tail_bound = 0;
        cert.provenance = Provenance::enumeration;
        return cert;
    }
    std::vector<PeriodCertificate> parts;
    parts.reserve(fact.size());
    for (const auto& pp : fact)
        parts.push_back(detail::prime_power_certificate(f, pp.prime, pp.exponent, start, ceiling));
    if (parts.size() == 1) return parts.front();

    PeriodCertificate cert;
    cert.modulus = m;
    cert.period_multiple = 1;
    cert.tail_bound = 0;
    cert.provenance = Provenance::crt_combine;
    bool all_exact = true;
    bool any_start_specific = false;
    bool any_global = false;
    for (const auto& part : parts) {
        cert.period_multiple = lcm(cert.period_multiple, part.period_multiple);
        cert.tail_bound = std::max(cert.tail_bound, part.tail_bound);
        all_exact = all_exact && part.exact;
        (part.start ? any_start_specific : any_global) = true;
    }
    cert.exact = all_exact && !(any_start_specific && any_global);
    if (any_start_specific) cert.start = start;
    return cert;
}

/// The descending chain m, Lambda(m), Lambda(Lambda(m)), ..., 1. Each
/// link is a lambda_multiple certificate; stability of f at every
/// prime dividing a chain modulus is checked as encountered, since
/// only tower-stable maps are guaranteed to reach 1.
inline std::vector<PeriodCertificate> lambda_chain(const Polynomial& f, const Int& m,
                                                   unsigned max_depth = 64,
                                                   std::uint64_t ceiling = kDefaultEnumerationCeiling) {
    if (m <= 0) throw std::domain_error("lambda_chain: modulus must be positive");
    std::vector<PeriodCertificate> chain;
    std::vector<Int> checked;
    Int cur = m;
    for (unsigned depth = 0;; ++depth) {
        if (depth > max_depth)
            throw budget_error("lambda_chain: depth " + std::to_string(max_depth) +
                               " exceeded before reaching 1");
        for (const auto& pp : factorize(cur)) {
            if (std::find(checked.begin(), checked.end(), pp.prime) != checked.end()) continue;
            if (pp.prime > ceiling)
                throw budget_error("lambda_chain: prime " + pp.prime.str() +
                                   " above the enumeration ceiling");
            if (detail::is_single_cycle_mod_p(f, to_u64(pp.prime)))
                throw unstable_error("lambda_chain: map is a single " + pp.prime.str() +
                                         "-cycle mod " + pp.prime.str(),
                                     pp.prime);
            checked.push_back(pp.prime);
        }
        chain.push_back(lambda_multiple(f, cur, std::nullopt, ceiling));
        if (cur == 1) break;
        cur = chain.back().period_multiple;
    }
    return chain;
}

/// Tail/period bounds for an affine map bx + c modulo a prime:
/// b == 0 (mod p) contracts to a fixed value within one step; b == 1
/// translates with period dividing p; otherwise the exact single-orbit
/// data is enumerated.
struct LinearCycleBounds {
    Int tail_bound;
    Int period_divisor;
    bool exact = false;

    bool operator==(const LinearCycleBounds&) const = default;
};

inline LinearCycleBounds linear_cycle_bounds(const Int& b, const Int& c, const Int& s,
                                             const Int& p) {
    if (!is_probable_prime(p)) throw std::domain_error("linear_cycle_bounds: p must be prime");
    Int bm = mod_floor(b, p);
    if (bm == 0) return {Int(1), Int(1), false};
    if (bm == 1) return {Int(0), p, false};
    Polynomial g(std::vector<Int>{c, b});
    OrbitShape shape = orbit_shape(g, s, p);
    return {Int(shape.tail), Int(shape.cycle), true};
}

/// f^e(x0) mod m for f = b*x + c in O(log e) multiplications, using
/// f^e(x) = b^e x + c * (b^(e-1) + ... + 1). The geometric sum is
/// carried alongside the power so no division mod m is ever needed.
inline Int closed_form_linear_iterate(const Int& bcoef, const Int& c, const Int& x0, const Int& e,
                                      const Int& m) {
    if (m <= 0) throw std::domain_error("closed_form_linear_iterate: modulus must be positive");
    if (e < 0) throw std::domain_error("closed_form_linear_iterate: negative exponent");
    if (m == 1) return 0;
    if (e == 0) return mod_floor(x0, m);
    const Int b = mod_floor(bcoef, m);
    Int p = 1;  // b^(prefix)
    Int s = 0;  // sum of b^i over the prefix
    const unsigned top = boost::multiprecision::msb(e);
    for (unsigned bit = top + 1; bit-- > 0;) {
        s = mod_floor(s * (p + 1), m);
        p = mod_floor(p * p, m);
        if (boost::multiprecision::bit_test(e, bit)) {
            s = mod_floor(s * b + 1, m);
            p = mod_floor(p * b, m);
        }
    }
    return mod_floor(p * mod_floor(x0, m) + mod_floor(c, m) * s, m);
}

/// Convenience overload dispatching on a polynomial; degree must be <= 1.
inline Int closed_form_linear_iterate(const Polynomial& f, const Int& x0, const Int& e,
                                      const Int& m) {
    if (f.degree() >= 2)
        throw std::invalid_argument("closed_form_linear_iterate: polynomial degree exceeds 1");
    const auto& co = f.coefficients();
    Int b = co.size() > 1 ? co[1] : Int(0);
    return closed_form_linear_iterate(b, co[0], x0, e, m);
}

}  // namespace polytower
