// dynamics.hpp
// -----------------------------------------------------------------
// Finite dynamical systems of a polynomial map on Z/mZ.
//
//  * orbit_shape  - exact tail/cycle of one start point, Brent's
//                   cycle finding, O(tail + cycle) evaluations.
//  * analyze_map  - full functional-graph analysis by enumeration
//                   (preperiod K, period L, per-point data).
//  * iterate_reduced / iterate_exact - read f^e(a) mod m off the
//                   stored orbit instead of performing e steps.
//
// Every orbit of a map on m points is rho-shaped: values repeat iff
// the index is past the tail, with period equal to the cycle length.
// -----------------------------------------------------------------
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "integer.hpp"
#include "polynomial.hpp"

namespace polytower {

inline constexpr std::uint64_t kDefaultOrbitBudget = 1ull << 25;
inline constexpr std::uint64_t kDefaultOrbitCache = 1ull << 22;
inline constexpr std::uint64_t kDefaultEnumerationCeiling = 1'000'000;

/// Repeated evaluation of one polynomial modulo one fixed m.
/// Coefficients are reduced once; the word-sized path is the hot loop
/// behind every orbit walk.
class ModEvaluator {
public:
    ModEvaluator(const Polynomial& f, Int m) : m_(std::move(m)) {
        if (m_ <= 0) throw std::domain_error("ModEvaluator: modulus must be positive");
        small_ = fits_u64(m_);
        const auto& c = f.coefficients();
        if (small_) {
            m64_ = to_u64(m_);
            c64_.reserve(c.size());
            for (auto it = c.rbegin(); it != c.rend(); ++it)
                c64_.push_back(to_u64(mod_floor(*it, m_)));
        } else {
            cbig_.reserve(c.size());
            for (auto it = c.rbegin(); it != c.rend(); ++it) cbig_.push_back(mod_floor(*it, m_));
        }
    }

    bool small() const { return small_; }
    const Int& modulus() const { return m_; }

    std::uint64_t eval_small(std::uint64_t x) const {
        std::uint64_t acc = 0;
        for (std::uint64_t c : c64_)
            acc = static_cast<std::uint64_t>((static_cast<unsigned __int128>(acc) * x + c) % m64_);
        return acc;
    }

    Int eval(const Int& x) const {
        if (small_) return Int(eval_small(to_u64(mod_floor(x, m_))));
        Int acc = 0;
        Int xr = mod_floor(x, m_);
        for (const Int& c : cbig_) acc = mod_floor(acc * xr + c, m_);
        return acc;
    }

private:
    Int m_;
    bool small_ = true;
    std::uint64_t m64_ = 1;
    std::vector<std::uint64_t> c64_;
    std::vector<Int> cbig_;
};

/// Tail length k and cycle length l of one orbit modulo m, minimal in
/// the sense that f^k'(a) == f^(k'+l')(a) iff k <= k' and l | l'.
/// The orbit prefix (k + l values) is cached when it fits the cache
/// bound; otherwise queries recompute by walking.
struct OrbitShape {
    Int modulus;
    Int start;        // reduced into [0, m)
    std::uint64_t tail = 0;
    std::uint64_t cycle = 1;
    Int entry_value;  // f^tail(start) mod m
    std::shared_ptr<const std::vector<std::uint64_t>> cache_small;
    std::shared_ptr<const std::vector<Int>> cache_big;

    bool operator==(const OrbitShape& o) const {
        return modulus == o.modulus && start == o.start && tail == o.tail && cycle == o.cycle &&
               entry_value == o.entry_value;
    }
};

namespace detail {

template <class Value, class Step, class Eq>
std::pair<std::uint64_t, std::uint64_t> brent_tail_cycle(const Value& x0, Step step, Eq eq,
                                                         std::uint64_t max_steps) {
    // Phase 1: cycle length. If tail + cycle <= max_steps the first
    // match happens within 4*max_steps + 3 evaluations.
    const std::uint64_t eval_cap = max_steps < (std::uint64_t(1) << 61)
                                       ? 4 * max_steps + 16
                                       : std::numeric_limits<std::uint64_t>::max();
    std::uint64_t evals = 0;
    std::uint64_t power = 1, lam = 1;
    Value tortoise = x0;
    Value hare = step(x0);
    ++evals;
    while (!eq(tortoise, hare)) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = step(hare);
        ++lam;
        if (++evals > eval_cap)
            throw budget_error("orbit walk exceeded " + std::to_string(max_steps) + " steps");
    }
    // Phase 2: tail length.
    tortoise = x0;
    hare = x0;
    for (std::uint64_t i = 0; i < lam; ++i) hare = step(hare);
    std::uint64_t mu = 0;
    while (!eq(tortoise, hare)) {
        tortoise = step(tortoise);
        hare = step(hare);
        if (++mu > max_steps)
            throw budget_error("orbit tail exceeded " + std::to_string(max_steps) + " steps");
    }
    if (mu + lam > max_steps)
        throw budget_error("orbit needs " + std::to_string(mu + lam) + " steps, budget " +
                           std::to_string(max_steps));
    return {mu, lam};
}

}  // namespace detail

/// Exact minimal (tail, cycle) for the orbit of a modulo m.
inline OrbitShape orbit_shape(const Polynomial& f, const Int& a, const Int& m,
                              std::uint64_t max_steps = kDefaultOrbitBudget,
                              std::uint64_t cache_bound = kDefaultOrbitCache) {
    if (m <= 0) throw std::domain_error("orbit_shape: modulus must be positive");
    OrbitShape shape;
    shape.modulus = m;
    shape.start = mod_floor(a, m);
    if (m == 1) {
        shape.entry_value = 0;
        shape.cache_small = std::make_shared<const std::vector<std::uint64_t>>(1, 0);
        return shape;
    }
    ModEvaluator eval(f, m);
    if (eval.small()) {
        const std::uint64_t x0 = to_u64(shape.start);
        auto step = [&eval](std::uint64_t x) { return eval.eval_small(x); };
        auto [mu, lam] = detail::brent_tail_cycle<std::uint64_t>(
            x0, step, [](std::uint64_t a_, std::uint64_t b_) { return a_ == b_; }, max_steps);
        shape.tail = mu;
        shape.cycle = lam;
        std::uint64_t entry = x0;
        if (mu + lam <= cache_bound) {
            auto orbit = std::make_shared<std::vector<std::uint64_t>>();
            orbit->reserve(mu + lam);
            std::uint64_t v = x0;
            for (std::uint64_t i = 0; i < mu + lam; ++i) {
                orbit->push_back(v);
                v = eval.eval_small(v);
            }
            entry = (*orbit)[mu];
            shape.cache_small = std::move(orbit);
        } else {
            for (std::uint64_t i = 0; i < mu; ++i) entry = eval.eval_small(entry);
        }
        shape.entry_value = Int(entry);
    } else {
        auto step = [&eval](const Int& x) { return eval.eval(x); };
        auto [mu, lam] = detail::brent_tail_cycle<Int>(
            shape.start, step, [](const Int& a_, const Int& b_) { return a_ == b_; }, max_steps);
        shape.tail = mu;
        shape.cycle = lam;
        Int entry = shape.start;
        if (mu + lam <= cache_bound) {
            auto orbit = std::make_shared<std::vector<Int>>();
            orbit->reserve(mu + lam);
            Int v = shape.start;
            for (std::uint64_t i = 0; i < mu + lam; ++i) {
                orbit->push_back(v);
                v = eval.eval(v);
            }
            entry = (*orbit)[mu];
            shape.cache_big = std::move(orbit);
        } else {
            for (std::uint64_t i = 0; i < mu; ++i) entry = eval.eval(entry);
        }
        shape.entry_value = entry;
    }
    return shape;
}

/// f^e(start) mod m for an exact exponent e >= 0, via index arithmetic
/// on the rho shape; never iterates e times.
inline Int iterate_exact(const Polynomial& f, const OrbitShape& shape, const Int& exponent) {
    if (exponent < 0) throw std::domain_error("iterate_exact: negative exponent");
    Int idx_big = exponent;
    const Int span = Int(shape.tail) + Int(shape.cycle);
    if (idx_big >= span) idx_big = Int(shape.tail) + (idx_big - shape.tail) % shape.cycle;
    const std::uint64_t idx = to_u64(idx_big);
    if (shape.cache_small) return Int((*shape.cache_small)[idx]);
    if (shape.cache_big) return (*shape.cache_big)[idx];
    ModEvaluator eval(f, shape.modulus);
    if (eval.small()) {
        std::uint64_t v = to_u64(shape.start);
        for (std::uint64_t i = 0; i < idx; ++i) v = eval.eval_small(v);
        return Int(v);
    }
    Int v = shape.start;
    for (std::uint64_t i = 0; i < idx; ++i) v = eval.eval(v);
    return v;
}

/// Exponent known only by congruence: the smallest e >= max(floor, tail)
/// with e == residue (mod modulus).
struct ExponentTarget {
    Int residue;
    Int modulus;  // must be a positive multiple of the orbit's cycle
    Int floor;    // lower bound on the true exponent
};

/// f^e(a) mod m for the e described by target. Sound whenever the true
/// exponent satisfies the same congruence and bound, because values on
/// the orbit depend only on (e mod cycle, e >= tail).
inline Int iterate_reduced(const Polynomial& f, const Int& a, const Int& m,
                           const OrbitShape& shape, const ExponentTarget& target) {
    if (shape.modulus != m || shape.start != mod_floor(a, m))
        throw std::invalid_argument("iterate_reduced: shape does not match (a, m)");
    if (target.modulus <= 0 || target.modulus % shape.cycle != 0)
        throw std::invalid_argument("iterate_reduced: target modulus is not a multiple of the cycle");
    if (target.floor < 0) throw std::invalid_argument("iterate_reduced: negative floor");
    Int lo = target.floor;
    if (lo < shape.tail) lo = shape.tail;
    Int e = mod_floor(target.residue, target.modulus);
    if (e < lo) e += ((lo - e + target.modulus - 1) / target.modulus) * target.modulus;
    return iterate_exact(f, shape, e);
}

/// Whole-map data for f on Z/mZ: per-point tails and cycles, preperiod
/// K = max tail, period L = lcm of cycle lengths.
struct GraphSummary {
    Int modulus;
    std::vector<std::uint32_t> tails;   // indexed by residue
    std::vector<std::uint32_t> cycles;  // indexed by residue
    std::uint64_t preperiod = 0;        // K
    Int period = 1;                     // L
    std::map<std::uint64_t, std::uint32_t> period_factors;  // prime -> exponent in L
    std::map<std::uint64_t, std::uint64_t> cycle_inventory;  // cycle length -> count of cycles

    /// alpha(L) without refactoring the possibly huge lcm.
    Int alpha_of_period() const {
        Int best = 1;
        for (const auto& [p, e] : period_factors) {
            Int q = pow(Int(p), e);
            if (q > best) best = q;
        }
        return best;
    }

    OrbitShape shape_of(const Polynomial& f, const Int& a) const {
        return orbit_shape(f, a, modulus);
    }
};

namespace detail {

/// True iff the induced map on Z/pZ is one cycle through all p points:
/// the walk from 0 visits p distinct values and returns to 0.
inline bool is_single_cycle_mod_p(const Polynomial& f, std::uint64_t p) {
    ModEvaluator eval(f, Int(p));
    std::vector<std::uint8_t> seen(p, 0);
    std::uint64_t x = 0;
    for (std::uint64_t i = 0; i < p; ++i) {
        if (seen[x]) return false;
        seen[x] = 1;
        x = eval.eval_small(x);
    }
    return x == 0;
}

}  // namespace detail

/// Exact (tail, cycle) for every residue by iterative path peeling.
/// m must stay below the enumeration ceiling; larger moduli belong to
/// orbit_shape or the lifting certificates.
inline GraphSummary analyze_map(const Polynomial& f, const Int& m,
                                std::uint64_t ceiling = kDefaultEnumerationCeiling) {
    if (m <= 0) throw std::domain_error("analyze_map: modulus must be positive");
    if (m > ceiling || m > 0x7fffffff)
        throw budget_error("analyze_map: modulus " + m.str() + " above enumeration ceiling " +
                           std::to_string(ceiling));
    const std::uint32_t n = static_cast<std::uint32_t>(to_u64(m));
    ModEvaluator eval(f, m);

    std::vector<std::uint32_t> next(n);
    for (std::uint32_t x = 0; x < n; ++x) next[x] = static_cast<std::uint32_t>(eval.eval_small(x));

    GraphSummary out;
    out.modulus = m;
    out.tails.assign(n, 0);
    out.cycles.assign(n, 1);
    std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on current path, 2 done
    std::vector<std::uint32_t> pos(n, 0);
    std::vector<std::uint32_t> path;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (state[root] != 0) continue;
        path.clear();
        std::uint32_t cur = root;
        while (state[cur] == 0) {
            state[cur] = 1;
            pos[cur] = static_cast<std::uint32_t>(path.size());
            path.push_back(cur);
            cur = next[cur];
        }
        std::uint32_t boundary;  // first path index still in the tail
        if (state[cur] == 1) {
            // Closed a new cycle at path position pos[cur].
            const std::uint32_t j = pos[cur];
            const std::uint32_t len = static_cast<std::uint32_t>(path.size()) - j;
            ++out.cycle_inventory[len];
            for (std::uint32_t i = j; i < path.size(); ++i) {
                out.tails[path[i]] = 0;
                out.cycles[path[i]] = len;
            }
            boundary = j;
        } else {
            // Ran into an already-resolved node.
            boundary = static_cast<std::uint32_t>(path.size());
        }
        const std::uint32_t base_tail = state[cur] == 1 ? 0 : out.tails[cur];
        const std::uint32_t len = state[cur] == 1 ? out.cycles[path[boundary]] : out.cycles[cur];
        for (std::uint32_t i = 0; i < boundary; ++i) {
            out.tails[path[i]] = base_tail + (boundary - i);
            out.cycles[path[i]] = len;
        }
        for (std::uint32_t v : path) state[v] = 2;
    }

    for (std::uint32_t x = 0; x < n; ++x)
        out.preperiod = std::max<std::uint64_t>(out.preperiod, out.tails[x]);
    for (const auto& [len, count] : out.cycle_inventory) {
        (void)count;
        for (const auto& pp : factorize(Int(len))) {
            const std::uint64_t p = to_u64(pp.prime);
            auto it = out.period_factors.find(p);
            if (it == out.period_factors.end())
                out.period_factors.emplace(p, pp.exponent);
            else
                it->second = std::max(it->second, pp.exponent);
        }
    }
    out.period = 1;
    for (const auto& [p, e] : out.period_factors) out.period *= pow(Int(p), e);
    return out;
}

}  // namespace polytower
