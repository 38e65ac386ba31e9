#include "limdim/exact_real.hpp"
#include "limdim/ahlfors.hpp"
#include "limdim/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace limdim;

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rat("3/4") == make_rat(Int(3), Int(4)));
    CHECK(parse_rat("-6/8") == make_rat(Int(-3), Int(4)));
    CHECK(parse_rat("7") == Rat(7));
    CHECK(parse_rat("0.25") == make_rat(Int(1), Int(4)));
    CHECK(parse_rat("-1.5") == make_rat(Int(-3), Int(2)));
    CHECK(rat_to_string(make_rat(Int(2), Int(6))) == "1/3");
    CHECK_THROWS(parse_rat("1/0"));
    CHECK_THROWS(parse_rat("abc"));
}

TEST_CASE("rational log via mantissa splitting survives huge values") {
    Int big;
    mpz_ui_pow_ui(big.get_mpz_t(), 2, 4096);
    double lg = rat_log(Rat(big));
    CHECK(lg == doctest::Approx(4096 * std::log(2.0)).epsilon(1e-14));
    CHECK(rat_log(make_rat(Int(1), big)) == doctest::Approx(-4096 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("padic valuation") {
    CHECK(padic_valuation(Rat(18), Int(3)) == 2);
    CHECK(padic_valuation(make_rat(Int(5), Int(9)), Int(3)) == -2);
    CHECK(padic_valuation(make_rat(Int(-27), Int(4)), Int(3)) == 3);
}

TEST_CASE("largest_power_root") {
    auto [m1, t1] = largest_power_root(Int(64));
    CHECK(m1 == 2);
    CHECK(t1 == 6);
    auto [m2, t2] = largest_power_root(Int(7));
    CHECK(m2 == 7);
    CHECK(t2 == 1);
    auto [m3, t3] = largest_power_root(Int(36));
    CHECK(m3 == 6);
    CHECK(t3 == 2);
}

TEST_CASE("ExactReal ordering across representations") {
    ExactReal a = ExactReal::power(Rat(3), make_rat(Int(-3), Int(2)));  // 3^-1.5
    ExactReal b = ExactReal::power(Rat(2), Rat(-2));                    // 1/4
    // 3^-1.5 = 0.1924... < 0.25
    CHECK(a.cmp(b) < 0);
    CHECK(b.cmp(a) > 0);
    CHECK(a.cmp(a) == 0);
    CHECK(ExactReal::from_rat(make_rat(Int(1), Int(4))).cmp(b) == 0);

    // sqrt(5) vs 9/4: 2.236 < 2.25
    ExactReal s5 = ExactReal::power(Rat(5), make_rat(Int(1), Int(2)));
    CHECK(s5.cmp(make_rat(Int(9), Int(4))) < 0);
    CHECK(s5.cmp(Rat(2)) > 0);
}

TEST_CASE("ExactReal multiplication and powers stay exact") {
    ExactReal x = ExactReal::power(Rat(3), make_rat(Int(1), Int(2)));
    ExactReal y = x.mul(x);
    CHECK(y.is_rational());
    CHECK(y.to_rational() == 3);
    ExactReal z = ExactReal::power(Rat(2), make_rat(Int(3), Int(4)))
                      .mul(ExactReal::power(Rat(2), make_rat(Int(1), Int(4))));
    CHECK(z.is_rational());
    CHECK(z.to_rational() == 2);
    CHECK(x.pow(Rat(4)).to_rational() == 9);
    CHECK(x.mul_rat(Rat(2)).pow(Rat(2)).to_rational() == 12);  // (2*sqrt(3))^2
}

TEST_CASE("ExactReal bounds and ceil") {
    ExactReal s2 = ExactReal::power(Rat(2), make_rat(Int(1), Int(2)));
    Rat lo = s2.lower_bound(64), hi = s2.upper_bound(64);
    CHECK(lo <= hi);
    CHECK(rat_to_double(lo) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s2.cmp(lo) >= 0);
    CHECK(s2.cmp(hi) <= 0);
    CHECK(s2.ceil_int() == 2);
    CHECK(ExactReal::from_rat(Rat(3)).ceil_int() == 3);
    CHECK(ExactReal::power(Rat(16), make_rat(Int(3), Int(10))).ceil_int() == 3);  // 16^0.3=2.297
}

TEST_CASE("ExactReal base normalization exposes common bases") {
    ExactReal q4 = ExactReal::from_rat(Rat(4)).normalized();
    CHECK(q4.base() == 2);
    CHECK(q4.exponent() == 2);
    ExactReal q16 = ExactReal::from_rat(Rat(16)).normalized();
    CHECK(q16.base() == 2);
    CHECK(q16.exponent() == 4);
    ExactReal g = ExactReal::power(Rat(4), make_rat(Int(1), Int(2))).normalized();
    CHECK(g.is_rational());
    CHECK(g.to_rational() == 2);
}

TEST_CASE("ExactReal comparisons agree with doubles away from ties") {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        long b1 = 2 + long(rng.below(50)), b2 = 2 + long(rng.below(50));
        Rat e1 = make_rat(Int(long(rng.below(41)) - 20), Int(1 + long(rng.below(4))));
        Rat e2 = make_rat(Int(long(rng.below(41)) - 20), Int(1 + long(rng.below(4))));
        ExactReal x = ExactReal::power(Rat(b1), e1);
        ExactReal y = ExactReal::power(Rat(b2), e2);
        double lx = x.log(), ly = y.log();
        if (std::fabs(lx - ly) < 1e-9) continue;
        CHECK(x.cmp(y) == (lx < ly ? -1 : 1));
    }
}

TEST_CASE("sum comparison helper") {
    // 1/4 + 2^-2 vs 3^-1:  0.5 > 1/3
    CHECK(cmp_rat_plus_er_vs_er(make_rat(Int(1), Int(4)), ExactReal::power(Rat(2), Rat(-2)),
                                ExactReal::power(Rat(3), Rat(-1)), 0) > 0);
    // 0 + 3^-2 vs 3^-1
    CHECK(cmp_rat_plus_er_vs_er(Rat(0), ExactReal::power(Rat(3), Rat(-2)),
                                ExactReal::power(Rat(3), Rat(-1)), 0) < 0);
    // exact tie: 1/2 + 1/2 vs 1
    CHECK(cmp_rat_plus_er_vs_er(make_rat(Int(1), Int(2)),
                                ExactReal::power(Rat(2), Rat(-1)),
                                ExactReal::from_rat(Rat(1)), 5) == 0);
    // irrational separated case: sqrt(2) + sqrt(2) vs 3  (2.828 < 3)
    ExactReal s2 = ExactReal::power(Rat(2), make_rat(Int(1), Int(2)));
    CHECK(cmp_er_plus_er_vs_er(s2, s2, ExactReal::from_rat(Rat(3)), 0) < 0);
}

TEST_CASE("pow_delta exact on matching bases") {
    DeltaExp gamma = DeltaExp::log_ratio(Int(2), Int(3));  // log 2 / log 3
    auto r = pow_delta(ExactReal::power(Rat(3), Rat(4)), gamma);
    REQUIRE(r.has_value());
    CHECK(r->is_rational());
    CHECK(r->to_rational() == 16);  // (3^4)^(log2/log3) = 2^4
    auto r2 = pow_delta(ExactReal::power(Rat(9), Rat(2)), gamma);  // 9 = 3^2
    REQUIRE(r2.has_value());
    CHECK(r2->to_rational() == 16);
    CHECK_FALSE(pow_delta(ExactReal::power(Rat(5), Rat(1)), gamma).has_value());
    DeltaExp one = DeltaExp::from_rat(Rat(1));
    auto r3 = pow_delta(ExactReal::power(Rat(5), Rat(2)), one);
    REQUIRE(r3.has_value());
    CHECK(r3->to_rational() == 25);
}

TEST_CASE("rng determinism") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(42);
    Rat r1 = c.unit_rat();
    Rng d(42);
    CHECK(d.unit_rat() == r1);
}
