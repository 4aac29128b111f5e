// limits.hpp
// -----------------------------------------------------------------
// The profinite limit engine.
//
// For a tower-stable polynomial f and a divergent start a, the tower
// sequence y0 = b, y_{k+1} = f^(y_k)(a) stabilizes modulo every m to
// a common, seed-independent value t, which satisfies the fixed-point
// congruence f^t(a) == t (mod m) for every m. The engine computes
// t mod m by recursion on moduli: the value of f^t(a) mod m depends
// only on t modulo the cycle length of a's orbit mod m (and on t
// being large, which divergence guarantees), so t mod m reduces to
// t mod cycle, a strictly simpler instance that reaches modulus 1
// because lambda-chains of tower-stable maps terminate.
//
// Degree-1 maps never materialize orbits: cycle-length multiples and
// tail bounds come from per-prime data and the evaluation is a
// closed-form modular power.
// -----------------------------------------------------------------
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "integer.hpp"
#include "periods.hpp"
#include "polynomial.hpp"
#include "stability.hpp"

namespace polytower {

struct LimitOptions {
    std::uint64_t orbit_budget = kDefaultOrbitBudget;
    std::uint64_t orbit_cache = kDefaultOrbitCache;
    std::uint64_t literal_budget = 10'000'000;
    std::uint64_t preperiodic_budget = 10'000;
    std::uint64_t enumeration_ceiling = kDefaultEnumerationCeiling;
    std::uint64_t exact_prefix_cap = 1'000'000;
    unsigned max_chain_depth = 4096;
};

/// Proof that the integer orbit of a closes: f^tail(a) == f^(tail+cycle)(a)
/// exactly. Such starts are excluded from limit computations, which are
/// only meaningful for divergent orbits.
struct PreperiodicWitness {
    Int start;
    std::uint64_t tail = 0;
    std::uint64_t cycle = 1;
    Int repeated_value;

    bool operator==(const PreperiodicWitness&) const = default;
};

namespace detail {

/// One past the largest magnitude at which f(x) - x can vanish; for
/// positive-leading f - x, every integer orbit value above this bound
/// increases strictly forever.
inline std::pair<bool, Int> growth_threshold(const Polynomial& f) {
    std::vector<Int> g = f.coefficients();
    if (g.size() >= 2) g[1] -= 1;
    Polynomial gm(std::move(g));
    if (gm.is_zero() || gm.leading_coefficient() < 0) return {false, 0};
    const auto& c = gm.coefficients();
    Int bound = 1;
    if (c.size() > 1) {
        Int top = 0;
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            Int mag = c[i] < 0 ? Int(-c[i]) : c[i];
            if (mag > top) top = mag;
        }
        Int lead = c.back();
        bound = 1 + (top + lead - 1) / lead;
    }
    return {true, bound};
}

}  // namespace detail

/// Walk the exact integer orbit of a. Returns the witness if it closes,
/// nullopt once divergence is certain (value beyond every root of
/// f(x) - x and strictly increasing twice), and throws
/// inconclusive_error when the budget runs out with neither.
inline std::optional<PreperiodicWitness> detect_preperiodic(const Polynomial& f, const Int& a,
                                                            std::uint64_t budget = 10'000) {
    auto [can_diverge, root_bound] = detail::growth_threshold(f);
    Int threshold = a < 0 ? Int(-a) : a;
    if (root_bound > threshold) threshold = root_bound;

    std::map<Int, std::uint64_t> seen;
    Int v = a;
    unsigned increasing_streak = 0;
    for (std::uint64_t step = 0; step <= budget; ++step) {
        auto [it, inserted] = seen.emplace(v, step);
        if (!inserted) {
            PreperiodicWitness w;
            w.start = a;
            w.tail = it->second;
            w.cycle = step - it->second;
            w.repeated_value = v;
            return w;
        }
        if (can_diverge && increasing_streak >= 2 && v > threshold) return std::nullopt;
        if (v != 0 && boost::multiprecision::msb(v < 0 ? Int(-v) : v) > (1u << 20))
            throw inconclusive_error(
                "detect_preperiodic: orbit values outgrew the tracking bound without a repeat");
        Int next = f(v);
        increasing_streak = next > v ? increasing_streak + 1 : 0;
        v = std::move(next);
    }
    throw inconclusive_error("detect_preperiodic: no repeat and no divergence certificate within " +
                             std::to_string(budget) + " steps");
}

namespace detail {

inline void require_divergent_start(const Polynomial& f, const Int& a, const LimitOptions& opts) {
    if (auto w = detect_preperiodic(f, a, opts.preperiodic_budget))
        throw preperiodic_error("start " + a.str() + " is preperiodic (f^" +
                                    std::to_string(w->tail) + " repeats with cycle " +
                                    std::to_string(w->cycle) + ")",
                                a, w->tail, w->cycle, w->repeated_value);
}

/// Throws unstable_error if any prime dividing m carries a p-cycle.
/// Primes already cleared in this call tree are skipped.
inline void require_stable_at(const Polynomial& f, const Int& m, std::vector<Int>& cleared,
                              const LimitOptions& opts) {
    for (const auto& pp : factorize(m)) {
        if (std::find(cleared.begin(), cleared.end(), pp.prime) != cleared.end()) continue;
        if (pp.prime > opts.enumeration_ceiling)
            throw budget_error("stability gate: prime " + pp.prime.str() +
                               " above the enumeration ceiling");
        if (is_single_cycle_mod_p(f, to_u64(pp.prime)))
            throw unstable_error(
                "map is a single " + pp.prime.str() + "-cycle mod " + pp.prime.str(), pp.prime);
        cleared.push_back(pp.prime);
    }
}

/// Evaluation of f^e(a) mod one fixed modulus, with a certified
/// reduction of the exponent: the value depends only on e mod
/// next_modulus once e >= tail_bound. Orbit-backed for degree >= 2,
/// affine closed form for degree <= 1.
struct LevelEngine {
    Int modulus;
    bool affine = false;
    std::optional<OrbitShape> shape;  // orbit route
    Int next_modulus = 1;
    Int tail_bound = 0;

    Int at_exact(const Polynomial& f, const Int& a, const Int& e) const {
        if (modulus == 1) return 0;
        if (affine) return closed_form_linear_iterate(f, a, e, modulus);
        return iterate_exact(f, *shape, e);
    }

    /// Value for a true exponent known to be >= tail_bound and congruent
    /// to r modulo next_modulus.
    Int at_large(const Polynomial& f, const Int& a, const Int& r) const {
        if (modulus == 1) return 0;
        if (affine) {
            Int e = mod_floor(r, next_modulus);
            if (e < tail_bound)
                e += ((tail_bound - e + next_modulus - 1) / next_modulus) * next_modulus;
            return closed_form_linear_iterate(f, a, e, modulus);
        }
        return iterate_reduced(f, a, modulus, *shape, {r, next_modulus, tail_bound});
    }
};

inline LevelEngine make_level(const Polynomial& f, const Int& a, const Int& m,
                              const LimitOptions& opts) {
    LevelEngine lvl;
    lvl.modulus = m;
    if (m == 1) return lvl;
    if (f.degree() == 1) {
        lvl.affine = true;
        Int lam = 1;
        Int theta = 0;
        for (const auto& pp : factorize(m)) {
            PeriodCertificate part = detail::affine_prime_power_certificate(
                f, a, pp.prime, pp.exponent, opts.orbit_budget);
            lam = lcm(lam, part.period_multiple);
            theta = std::max(theta, part.tail_bound);
        }
        lvl.next_modulus = lam;
        lvl.tail_bound = theta;
        return lvl;
    }
    lvl.shape = orbit_shape(f, a, m, opts.orbit_budget, opts.orbit_cache);
    lvl.next_modulus = Int(lvl.shape->cycle);
    lvl.tail_bound = Int(lvl.shape->tail);
    return lvl;
}

/// Moduli chain m, r1, r2, ..., 1 with one engine per level, where each
/// next modulus certifies the exponent reduction of the level above.
inline std::vector<LevelEngine> build_chain(const Polynomial& f, const Int& a, const Int& m,
                                            const LimitOptions& opts) {
    std::vector<LevelEngine> levels;
    std::vector<Int> cleared_primes;
    Int cur = m;
    for (unsigned depth = 0;; ++depth) {
        if (depth > opts.max_chain_depth)
            throw budget_error("modulus chain did not reach 1 within depth " +
                               std::to_string(opts.max_chain_depth));
        require_stable_at(f, cur, cleared_primes, opts);
        levels.push_back(make_level(f, a, cur, opts));
        if (cur == 1) break;
        cur = levels.back().next_modulus;
    }
    return levels;
}

/// Fold a chain bottom-up into t mod chain.front().modulus.
inline Int fold_chain(const Polynomial& f, const Int& a, const std::vector<LevelEngine>& levels) {
    Int r = 0;  // t mod 1
    for (std::size_t i = levels.size() - 1; i-- > 0;) r = levels[i].at_large(f, a, r);
    return r;
}

}  // namespace detail

/// t mod m for the common limit t of all tower sequences of (f, a).
/// Requires f tower-stable at every prime met in the modulus recursion
/// and a start with divergent integer orbit.
inline Int profinite_limit_mod(const Polynomial& f, const Int& a, const Int& m,
                               const LimitOptions& opts = {}) {
    if (m <= 0) throw std::domain_error("profinite_limit_mod: modulus must be positive");
    if (m == 1) return 0;
    detail::require_divergent_start(f, a, opts);
    auto chain = detail::build_chain(f, a, m, opts);
    return detail::fold_chain(f, a, chain);
}

/// True iff f^x(a) == x (mod m). Reduced mode routes the exponent
/// through the orbit's tail/cycle (or the affine closed form); literal
/// mode performs exactly x evaluation steps and is the independent
/// oracle for the reduced path.
enum class VerifyMode { reduced, literal };

inline bool verify_selfref(const Polynomial& f, const Int& a, const Int& x, const Int& m,
                           VerifyMode mode = VerifyMode::reduced, const LimitOptions& opts = {}) {
    if (m <= 0) throw std::domain_error("verify_selfref: modulus must be positive");
    if (x < 0) throw std::domain_error("verify_selfref: exponent must be non-negative");
    Int value;
    if (mode == VerifyMode::literal) {
        if (x > opts.literal_budget)
            throw budget_error("verify_selfref: literal exponent " + x.str() + " exceeds budget " +
                               std::to_string(opts.literal_budget));
        ModEvaluator eval(f, m);
        const std::uint64_t steps = to_u64(x);
        if (eval.small()) {
            std::uint64_t v = to_u64(mod_floor(a, m));
            for (std::uint64_t i = 0; i < steps; ++i) v = eval.eval_small(v);
            value = Int(v);
        } else {
            Int v = mod_floor(a, m);
            for (std::uint64_t i = 0; i < steps; ++i) v = eval.eval(v);
            value = v;
        }
    } else if (f.degree() <= 1) {
        value = closed_form_linear_iterate(f, a, x, m);
    } else {
        OrbitShape shape = orbit_shape(f, a, m, opts.orbit_budget, opts.orbit_cache);
        value = iterate_exact(f, shape, x);
    }
    return value == mod_floor(x, m);
}

/// Base-b digit expansion of the limit t with per-level solutions of
/// the self-referential congruence.
struct DigitStream {
    Polynomial map;
    Int start;
    Int base = 10;
    std::vector<Int> digits;        // c_0 .. c_{n-1}, least significant first
    std::vector<Int> partial_sums;  // x_k = sum_{i<k} c_i b^i, for k = 1..n
    std::vector<Int> solutions;     // emitted x_k, bumped by b^k when x_k = 0
    std::vector<bool> verified;     // f^(x_k)(a) == x_k (mod b^k) confirmed
    bool base_f_valid = false;      // annotation; not required for the digits to exist

    bool operator==(const DigitStream& o) const {
        return map == o.map && start == o.start && base == o.base && digits == o.digits &&
               partial_sums == o.partial_sums && solutions == o.solutions &&
               verified == o.verified && base_f_valid == o.base_f_valid;
    }
};

/// Digits of t in base b up to b^levels, each level checked against the
/// congruence it claims to solve. A level whose prefix is the integer 0
/// is emitted as 0 + b^k, the replacement that keeps every reported
/// solution a positive integer.
inline DigitStream digit_stream(const Polynomial& f, const Int& a, const Int& base,
                                unsigned levels, const LimitOptions& opts = {}) {
    if (base < 2) throw std::domain_error("digit_stream: base must be at least 2");
    DigitStream out;
    out.map = f;
    out.start = a;
    out.base = base;
    if (levels == 0) return out;

    detail::require_divergent_start(f, a, opts);
    const Int modulus = pow(base, levels);
    auto chain = detail::build_chain(f, a, modulus, opts);
    const Int limit_value = detail::fold_chain(f, a, chain);
    const detail::LevelEngine& top = chain.front();

    Int rest = limit_value;
    Int scale = 1;  // b^k
    Int x_k = 0;
    for (unsigned k = 1; k <= levels; ++k) {
        Int digit = rest % base;
        rest /= base;
        x_k += digit * scale;
        scale *= base;
        out.digits.push_back(digit);
        out.partial_sums.push_back(x_k);

        Int candidate = x_k == 0 ? scale : x_k;
        auto check = [&](const Int& e) {
            return mod_floor(top.at_exact(f, a, e), scale) == mod_floor(e, scale);
        };
        bool ok = check(candidate);
        if (!ok && candidate == x_k) {
            // The congruence can demand an exponent past the tail; the
            // same bump that restores positivity provides it.
            Int bumped = x_k + scale;
            if (check(bumped)) {
                candidate = bumped;
                ok = true;
            }
        }
        out.solutions.push_back(candidate);
        out.verified.push_back(ok);
    }
    try {
        out.base_f_valid = is_f_valid_base(f, base, opts.enumeration_ceiling);
    } catch (const budget_error&) {
        out.base_f_valid = false;
    }
    return out;
}

/// One tower sequence y_0 = seed, y_{k+1} = f^(y_k)(a) reduced mod m.
struct TowerTrace {
    Int seed;
    Int modulus;
    std::vector<Int> values;  // y_0 .. y_steps mod m
    std::optional<std::size_t> stabilization_index;

    bool operator==(const TowerTrace&) const = default;
};

/// Trace the tower sequence modulo m. Early steps whose true integer
/// value is still representable are reduced directly; once the tower
/// outgrows the exact prefix, each step's exponent is resolved through
/// the chain of cycle lengths, exactly like the limit computation.
inline TowerTrace tower_sequence_mod(const Polynomial& f, const Int& a, const Int& seed,
                                     const Int& m, std::size_t steps,
                                     const LimitOptions& opts = {}) {
    if (m <= 0) throw std::domain_error("tower_sequence_mod: modulus must be positive");
    if (seed < 1) throw std::domain_error("tower_sequence_mod: seed must be positive");
    detail::require_divergent_start(f, a, opts);
    auto chain = detail::build_chain(f, a, m, opts);

    // Exact orbit values f^e(a) while they stay below the stop bound;
    // every later value strictly exceeds it, hence exceeds every tail
    // bound in the chain.
    Int stop = Int(1) << 62;
    {
        auto [can_diverge, root_bound] = detail::growth_threshold(f);
        (void)can_diverge;
        if (root_bound > stop) stop = root_bound;
    }
    std::vector<Int> exact_orbit;
    {
        Int v = a;
        while (v <= stop && v >= -stop) {
            exact_orbit.push_back(v);
            if (exact_orbit.size() > opts.exact_prefix_cap)
                throw budget_error("tower_sequence_mod: exact orbit prefix exceeded its cap");
            v = f(v);
        }
        // Indices past the table are certified to exceed every tail
        // bound only when the orbit left upward.
        if (v < 0)
            throw inconclusive_error(
                "tower_sequence_mod: the integer orbit escapes downward; the tower recursion is "
                "only defined for maps sending positive integers to positive integers");
    }

    // z[j] = exact integer value of y_j when representable; nullopt
    // means y_j is certified to exceed the stop bound.
    std::vector<std::optional<Int>> z(steps + 1);
    z[0] = seed <= stop ? std::optional<Int>(seed) : std::nullopt;
    for (std::size_t j = 0; j + 1 <= steps; ++j) {
        if (z[j] && *z[j] < 0)
            throw std::domain_error(
                "tower_sequence_mod: tower value went negative; the iteration count f^(y)(a) "
                "requires y >= 0");
        if (z[j] && *z[j] < exact_orbit.size())
            z[j + 1] = exact_orbit[static_cast<std::size_t>(to_u64(*z[j]))];
        else
            z[j + 1] = std::nullopt;
    }

    std::vector<Int> below(steps + 1, Int(0));  // values at the next level down
    for (std::size_t li = chain.size(); li-- > 0;) {
        const detail::LevelEngine& lvl = chain[li];
        std::vector<Int> vals(steps + 1);
        vals[0] = mod_floor(seed, lvl.modulus);
        for (std::size_t j = 1; j <= steps; ++j) {
            if (z[j])
                vals[j] = mod_floor(*z[j], lvl.modulus);
            else if (z[j - 1])
                vals[j] = lvl.at_exact(f, a, *z[j - 1]);
            else
                vals[j] = lvl.at_large(f, a, below[j - 1]);
        }
        below = std::move(vals);
    }

    TowerTrace trace;
    trace.seed = seed;
    trace.modulus = m;
    trace.values = std::move(below);
    std::size_t s = trace.values.size() - 1;
    while (s > 0 && trace.values[s - 1] == trace.values.back()) --s;
    if (s < trace.values.size() - 1) trace.stabilization_index = s;
    return trace;
}

/// Testable shadow of the algebraic-limit statement: with t the limit
/// mod p^k and lambda the mod-p cycle length of a's orbit, checks
/// f^lambda(t) == t (mod p^k). Guaranteed when the mod-p multiplier
/// vanishes; can fail otherwise.
inline bool fixed_point_check(const Polynomial& f, const Int& a, const Int& p, unsigned k,
                              const LimitOptions& opts = {}) {
    if (!is_probable_prime(p)) throw std::domain_error("fixed_point_check: p must be prime");
    if (k == 0) return true;
    const Int pk = pow(p, k);
    const Int t = profinite_limit_mod(f, a, pk, opts);
    const std::uint64_t lam = orbit_shape(f, a, p, opts.orbit_budget, opts.orbit_cache).cycle;
    ModEvaluator eval(f, pk);
    Int v = t;
    for (std::uint64_t i = 0; i < lam; ++i) v = eval.eval(v);
    return v == t;
}

}  // namespace polytower
