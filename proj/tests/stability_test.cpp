#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "polytower/polytower.hpp"
#include "test_support.hpp"

using polytower::Int;
using polytower::Polynomial;
using polytower::parse_polynomial;
using polytower::StabilityVerdict;

TEST_CASE("is_p_cycle worked examples") {
    CHECK(polytower::is_p_cycle(parse_polynomial("x+1"), 5));
    CHECK_FALSE(polytower::is_p_cycle(parse_polynomial("x^2+x+3"), 5));
    CHECK_FALSE(polytower::is_p_cycle(parse_polynomial("7x"), 3));  // 0 is fixed
    CHECK_THROWS_AS(polytower::is_p_cycle(parse_polynomial("x"), 4), std::domain_error);
}

TEST_CASE("four p-cycle decision procedures agree") {
    auto polys = testsupport::corpus(12, 1111);
    for (const auto& f : polys)
        for (std::uint64_t p : polytower::primes_up_to(23)) {
            auto g = polytower::analyze_map(f, p);
            bool by_period = g.period != p;                       // lambda(p) != p
            bool by_walk = !polytower::is_p_cycle(f, p);          // not a p-cycle
            bool by_points = true;                                // all cycle lengths < p
            for (auto l : g.cycles) by_points = by_points && l < p;
            bool by_alpha = polytower::alpha(g.period) < p;       // alpha(lambda(p)) < p
            CHECK(by_period == by_walk);
            CHECK(by_walk == by_points);
            CHECK(by_points == by_alpha);
        }
}

TEST_CASE("stability report certifies the worked examples") {
    auto a = polytower::tower_stability_report(parse_polynomial("x^2+x+3"));
    CHECK(a.verdict == StabilityVerdict::stable_certified);
    REQUIRE(a.collision.has_value());
    CHECK(a.collision->first == 0);
    CHECK(a.collision->second == -1);
    CHECK_FALSE(a.fixed_point.has_value());
    CHECK(a.per_prime.empty());  // |c - c'| = 1 leaves no residual primes

    auto b = polytower::tower_stability_report(parse_polynomial("x+1"));
    CHECK(b.verdict == StabilityVerdict::unstable);
    REQUIRE(b.witness.has_value());
    CHECK(*b.witness == 2);
    bool witness_verdict_present = false;
    for (const auto& v : b.per_prime)
        if (v.prime == *b.witness) witness_verdict_present = v.p_cycle;
    CHECK(witness_verdict_present);

    auto c = polytower::tower_stability_report(parse_polynomial("7x"));
    CHECK(c.verdict == StabilityVerdict::stable_certified);
    REQUIRE(c.fixed_point.has_value());
    CHECK(*c.fixed_point == 0);
}

TEST_CASE("stability report is honest without a certificate") {
    // 4x^2 + x + 2 has no integer fixed point and no integer collision
    // (the symmetry axis sits at a non-integer), so only a bounded
    // prime sweep is possible.
    auto r = polytower::tower_stability_report(parse_polynomial("4x^2+x+2"), 50, 100);
    CHECK(r.verdict == StabilityVerdict::stable_up_to_bound);
    CHECK_FALSE(r.collision.has_value());
    CHECK_FALSE(r.fixed_point.has_value());
    CHECK(r.per_prime.size() == polytower::primes_up_to(50).size());
}

TEST_CASE("collision certificates really break injectivity") {
    std::mt19937_64 rng(17);
    auto polys = testsupport::corpus(30, 1212);
    std::uniform_int_distribution<std::size_t> pick(0, 50);
    auto primes = polytower::primes_up_to(300);
    for (const auto& f : polys) {
        auto r = polytower::tower_stability_report(f, 50, 200);
        if (!r.collision) continue;
        Int d = r.collision->first - r.collision->second;
        if (d < 0) d = -d;
        int tested = 0;
        for (std::size_t i = 0; i < primes.size() && tested < 20; ++i) {
            Int p = primes[pick(rng) % primes.size()];
            if (d % p == 0) continue;
            ++tested;
            // f(c) == f(c') mod p with c != c' mod p: not injective,
            // hence not a p-cycle.
            Int c1 = polytower::mod_floor(r.collision->first, p);
            Int c2 = polytower::mod_floor(r.collision->second, p);
            REQUIRE(c1 != c2);
            CHECK(polytower::eval_mod(f, c1, p) == polytower::eval_mod(f, c2, p));
            CHECK_FALSE(polytower::is_p_cycle(f, p));
        }
    }
}

TEST_CASE("valid bases") {
    CHECK(polytower::is_valid_base(10));
    CHECK_FALSE(polytower::is_valid_base(5));  // 2 | 5-1 but 2 does not divide 5
    CHECK(polytower::is_valid_base(2));
    CHECK(polytower::is_valid_base(1));
    CHECK(polytower::is_valid_base(6));
    CHECK_THROWS_AS(polytower::is_valid_base(0), std::domain_error);
}

TEST_CASE("f-valid bases") {
    Polynomial f = parse_polynomial("x^2+x+3");
    CHECK(polytower::is_f_valid_base(f, 10));
    CHECK_FALSE(polytower::is_f_valid_base(f, 20));  // not square-free
    CHECK_FALSE(polytower::is_f_valid_base(f, 5));   // 5 is not even valid
    try {
        polytower::is_f_valid_base(parse_polynomial("x+1"), 10);
        FAIL("expected unstable_error");
    } catch (const polytower::unstable_error& e) {
        CHECK(e.witness() == 2);
    }
}

TEST_CASE("stability density partial product") {
    CHECK(polytower::ctow_partial(2) == Catch::Approx(0.75).epsilon(1e-12));
    CHECK(polytower::ctow_partial(3) == Catch::Approx(0.75 * 25.0 / 27.0).epsilon(1e-12));
    CHECK(polytower::ctow_partial(200) == Catch::Approx(0.688).margin(5e-4));

    double prev = 1.0;
    for (std::uint64_t bound = 2; bound <= 300; ++bound) {
        double cur = polytower::ctow_partial(bound);
        CHECK(cur <= prev + 1e-15);
        prev = cur;
    }

    // Tail factors approach 1: the deviation (p-1)!/p^p is below 1e-10
    // from p = 20 on and below 1e-12 from p = 29 on.
    for (std::uint64_t p : polytower::primes_up_to(60)) {
        double term = 1.0 / static_cast<double>(p);
        for (std::uint64_t j = 1; j < p; ++j) term *= static_cast<double>(j) / p;
        if (p >= 29) CHECK(term < 1e-12);
        else if (p >= 20) CHECK(term < 1e-10);
    }

    CHECK_THROWS_AS(polytower::ctow_partial(1), std::domain_error);
}

TEST_CASE("corpus stability frequency is reported") {
    // Frequency of stable verdicts over a random polynomial corpus;
    // informational, asserted only to lie in a sane band.
    auto polys = testsupport::corpus(200, 1313);
    int stable = 0;
    for (const auto& f : polys)
        if (polytower::tower_stability_report(f, 50, 100).verdict != StabilityVerdict::unstable)
            ++stable;
    double freq = static_cast<double>(stable) / static_cast<double>(polys.size());
    INFO("corpus stable fraction: " << freq);
    CHECK(freq > 0.3);
    CHECK(freq <= 1.0);
}
