#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "polytower/polytower.hpp"
#include "test_support.hpp"

using polytower::Int;
using polytower::Polynomial;
using polytower::parse_polynomial;
using polytower::profinite_limit_mod;
using polytower::digit_stream;
using polytower::verify_selfref;
using polytower::VerifyMode;

TEST_CASE("detect_preperiodic") {
    auto w1 = polytower::detect_preperiodic(parse_polynomial("x"), 5);
    REQUIRE(w1.has_value());
    CHECK(w1->tail == 0);
    CHECK(w1->cycle == 1);

    auto w2 = polytower::detect_preperiodic(parse_polynomial("4"), 9);
    REQUIRE(w2.has_value());
    CHECK(w2->tail == 1);
    CHECK(w2->cycle == 1);
    CHECK(w2->repeated_value == 4);

    CHECK_FALSE(polytower::detect_preperiodic(parse_polynomial("x^2+x+3"), 0).has_value());

    // Strictly decreasing integer orbit: neither a repeat nor a
    // divergence certificate.
    CHECK_THROWS_AS(polytower::detect_preperiodic(parse_polynomial("x-5"), 5, 100),
                    polytower::inconclusive_error);
}

TEST_CASE("profinite limit worked examples") {
    CHECK(profinite_limit_mod(parse_polynomial("x^2+x+3"), 0, 1000) == 243);
    CHECK(profinite_limit_mod(parse_polynomial("7x"), 1, 10) == 3);
    CHECK(profinite_limit_mod(parse_polynomial("2x"), 1, 10) == 6);
    CHECK(profinite_limit_mod(parse_polynomial("x^2+x+3"), 0, 1) == 0);
}

TEST_CASE("profinite limit rejects bad hypotheses") {
    try {
        profinite_limit_mod(parse_polynomial("x+1"), 1, 5);
        FAIL("expected unstable_error");
    } catch (const polytower::unstable_error& e) {
        CHECK(e.witness() == 5);
    }
    CHECK_THROWS_AS(profinite_limit_mod(parse_polynomial("x"), 5, 10),
                    polytower::preperiodic_error);
    CHECK_THROWS_AS(profinite_limit_mod(parse_polynomial("x^2+x+3"), 0, 0), std::domain_error);
}

namespace {

// Independent route to t mod m: resolve the exponent through the
// global period from full enumeration and finish by literal iteration.
// Shares nothing with the production engine beyond single-step
// evaluation.
Int limit_via_global_period(const Polynomial& f, const Int& a, const Int& m, int depth = 0) {
    REQUIRE(depth < 64);
    if (m == 1) return 0;
    auto g = polytower::analyze_map(f, m, 2'000'000);
    Int r = limit_via_global_period(f, a, g.period, depth + 1);
    Int e = polytower::mod_floor(r, g.period);
    while (e < g.preperiod) e += g.period;
    return testsupport::literal_iterate(f, a, polytower::to_u64(e), m);
}

}  // namespace

TEST_CASE("the engine agrees with the global-period route") {
    for (const char* text : {"x^2+x+3", "x^2+2", "7x", "2x", "x^2+5x+7"}) {
        Polynomial f = parse_polynomial(text);
        Int a = text[0] == 'x' ? 0 : 1;
        for (Int m : {Int(10), Int(12), Int(37), Int(99), Int(100), Int(1000)}) {
            CAPTURE(text, m.str());
            CHECK(profinite_limit_mod(f, a, m) == limit_via_global_period(f, a, m));
        }
    }
}

TEST_CASE("limits are consistent across moduli") {
    Polynomial f = parse_polynomial("x^2+x+3");
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::uint64_t> mdist(1, 5000);
    for (int i = 0; i < 40; ++i) {
        Int m1 = mdist(rng), m2 = mdist(rng);
        Int g = polytower::gcd(m1, m2);
        Int t1 = profinite_limit_mod(f, 0, m1);
        Int t2 = profinite_limit_mod(f, 0, m2);
        CHECK(polytower::mod_floor(t1, g) == polytower::mod_floor(t2, g));
    }
}

TEST_CASE("digit stream worked examples") {
    auto a = digit_stream(parse_polynomial("x^2+x+3"), 0, 10, 3);
    CHECK(a.digits == std::vector<Int>{3, 4, 2});
    CHECK(a.partial_sums == std::vector<Int>{3, 43, 243});
    CHECK(a.solutions == std::vector<Int>{3, 43, 243});
    CHECK(a.verified == std::vector<bool>{true, true, true});
    CHECK(a.base_f_valid);

    auto b = digit_stream(parse_polynomial("7x"), 1, 10, 3);
    CHECK(b.partial_sums == std::vector<Int>{3, 43, 343});

    auto b22 = digit_stream(parse_polynomial("7x"), 1, 10, 22);
    std::string window;
    for (auto it = b22.digits.rbegin(); it != b22.digits.rend(); ++it) window += it->str();
    CHECK(window == "3643331265511565172343");
    for (bool v : b22.verified) CHECK(v);
}

TEST_CASE("digit stream prefix stability") {
    for (const char* text : {"x^2+x+3", "x^2+2"}) {
        auto s = digit_stream(parse_polynomial(text), 0, 10, 6);
        Int scale = 1;
        for (std::size_t k = 0; k + 1 < s.partial_sums.size(); ++k) {
            scale *= s.base;
            CHECK(polytower::mod_floor(s.partial_sums[k + 1], scale) == s.partial_sums[k]);
            CHECK(s.partial_sums[k + 1] - s.partial_sums[k] == s.digits[k + 1] * scale);
        }
    }
}

TEST_CASE("zero prefixes are emitted as positive solutions") {
    // 2x from 1 in base 2: the limit is 0 in Z_2, every prefix is 0,
    // and each level is emitted as the positive solution b^k.
    auto s = digit_stream(parse_polynomial("2x"), 1, 2, 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(s.digits[k] == 0);
        CHECK(s.partial_sums[k] == 0);
        CHECK(s.solutions[k] == polytower::pow(Int(2), static_cast<unsigned>(k + 1)));
        CHECK(s.verified[k]);
        CHECK(s.solutions[k] > 0);
    }
    CHECK(s.base_f_valid);  // 2 is square-free, valid, and lambda(2) = 1
}

TEST_CASE("tower traces stabilize to the limit") {
    Polynomial f = parse_polynomial("x^2+x+3");
    auto t1 = polytower::tower_sequence_mod(f, 0, 1, 10, 8);
    REQUIRE(t1.stabilization_index.has_value());
    CHECK(t1.values.back() == 3);
    CHECK(t1.values[0] == 1);

    auto t7 = polytower::tower_sequence_mod(f, 0, 7, 10, 8);
    CHECK(t7.values.back() == 3);  // seed independence

    auto t1000 = polytower::tower_sequence_mod(f, 0, 7, 1000, 10);
    CHECK(t1000.values.back() == 243);
    // y_1 = f^7(0) mod 1000, computed from the exact exponent 7.
    CHECK(t1000.values[1] == testsupport::literal_iterate(f, 0, 7, 1000));

    try {
        polytower::tower_sequence_mod(parse_polynomial("x+1"), 1, 1, 5, 5);
        FAIL("expected unstable_error");
    } catch (const polytower::unstable_error& e) {
        CHECK(e.witness() == 5);
    }

    auto t0 = polytower::tower_sequence_mod(f, 0, 3, 100, 0);
    CHECK(t0.values == std::vector<Int>{3});
    CHECK_FALSE(t0.stabilization_index.has_value());
    CHECK_THROWS_AS(polytower::tower_sequence_mod(f, 0, 0, 10, 5), std::domain_error);
}

TEST_CASE("verify_selfref in both modes") {
    Polynomial f = parse_polynomial("x^2+x+3");
    CHECK(verify_selfref(f, 0, 43, 100, VerifyMode::reduced));
    CHECK(verify_selfref(f, 0, 43, 100, VerifyMode::literal));
    CHECK(verify_selfref(parse_polynomial("7x"), 1, 343, 1000, VerifyMode::reduced));
    CHECK(verify_selfref(parse_polynomial("7x"), 1, 343, 1000, VerifyMode::literal));
    CHECK_FALSE(verify_selfref(f, 0, 44, 100, VerifyMode::reduced));
    CHECK_FALSE(verify_selfref(f, 0, 44, 100, VerifyMode::literal));

    polytower::LimitOptions tight;
    tight.literal_budget = 100;
    CHECK_THROWS_AS(verify_selfref(f, 0, 101, 7, VerifyMode::literal, tight),
                    polytower::budget_error);
}

TEST_CASE("reduced and literal verification agree") {
    std::mt19937_64 rng(37);
    auto polys = testsupport::corpus(6, 1414);
    std::uniform_int_distribution<std::uint64_t> mdist(2, 2000);
    std::uniform_int_distribution<std::uint64_t> xdist(0, 5000);
    for (const auto& f : polys)
        for (int t = 0; t < 10; ++t) {
            Int m = mdist(rng);
            Int x = xdist(rng);
            Int a = Int(xdist(rng)) % m;
            CHECK(verify_selfref(f, a, x, m, VerifyMode::reduced) ==
                  verify_selfref(f, a, x, m, VerifyMode::literal));
        }
}

TEST_CASE("fixed point shadow of the algebraic limit") {
    // Vanishing multiplier: the property is guaranteed.
    CHECK(polytower::fixed_point_check(parse_polynomial("x^2+2"), 0, 2, 3));
    CHECK(profinite_limit_mod(parse_polynomial("x^2+2"), 0, 8) == 6);
    CHECK(polytower::fixed_point_check(parse_polynomial("x^2"), 2, 2, 4));
    CHECK(polytower::fixed_point_check(parse_polynomial("x^2+x+3"), 0, 5, 0));

    // Non-vanishing multiplier: no guarantee, and this instance fails:
    // t == 18 (mod 25) while f^2(18) == 23 (mod 25).
    CHECK(polytower::multiplier(parse_polynomial("x^2+x+3"), 0, 5).value == 2);
    CHECK(profinite_limit_mod(parse_polynomial("x^2+x+3"), 0, 25) == 18);
    CHECK_FALSE(polytower::fixed_point_check(parse_polynomial("x^2+x+3"), 0, 5, 2));

    // Over a corpus, every vanishing-multiplier case passes.
    std::mt19937_64 rng(41);
    auto polys = testsupport::corpus(40, 1515);
    std::uniform_int_distribution<int> adist(0, 9);
    int confirmed = 0;
    for (const auto& f : polys) {
        Int a = adist(rng);
        for (std::uint64_t p : {2, 3, 5}) {
            auto mu = polytower::multiplier(f, a, p);
            if (mu.value != 0) continue;
            try {
                bool holds = polytower::fixed_point_check(f, a, p, 3);
                CHECK(holds);
                ++confirmed;
            } catch (const polytower::preperiodic_error&) {
                // hypothesis failures on random draws are expected
            } catch (const polytower::unstable_error&) {
            } catch (const polytower::inconclusive_error&) {
            }
        }
    }
    INFO("confirmed vanishing-multiplier fixed points: " << confirmed);
    CHECK(confirmed > 0);
}

TEST_CASE("periods of powers of the base eventually divide the base powers") {
    // lambda(10^(n+1)) = 8 * 5^(n-1) here, so the divisibility
    // lambda(10^(n+1)) | 10^n starts at n = 3 and holds from then on.
    Polynomial f = parse_polynomial("x^2+x+3");
    CHECK(polytower::lambda_exact(f, 100).period_multiple == 8);
    CHECK(polytower::lambda_exact(f, 1000).period_multiple == 40);
    Int lam4 = polytower::lambda_exact(f, 10'000, 10'000).period_multiple;
    CHECK(lam4 == 200);
    CHECK(Int(1000) % lam4 == 0);
}

TEST_CASE("digit stream propagates hypothesis failures") {
    try {
        digit_stream(parse_polynomial("x+1"), 1, 10, 3);
        FAIL("expected unstable_error");
    } catch (const polytower::unstable_error& e) {
        CHECK(e.witness() == 2);
    }
    CHECK_THROWS_AS(digit_stream(parse_polynomial("x"), 5, 10, 3),
                    polytower::preperiodic_error);
    CHECK_THROWS_AS(digit_stream(parse_polynomial("x^2+x+3"), 0, 1, 3), std::domain_error);
}
