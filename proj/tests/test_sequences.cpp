#include "limdim/sequence.hpp"

#include "doctest.h"

#include <cmath>

using namespace limdim;

TEST_CASE("doubly exponential family: levels, h, alpha") {
    auto real = make_real_lattice(1);
    SequenceSpec s{DoublyExponentialSeq{2, 2, 0}, 5};
    // S = 2, 4, 16, 256, 65536
    long expect[] = {2, 4, 16, 256, 65536};
    for (int j = 1; j <= 5; ++j)
        CHECK(std::get<IntLevel>(seq_level(s, real, j)).q == expect[j - 1]);

    SequenceStats st = stats(s, real);
    REQUIRE(st.h_inf_exact.has_value());
    CHECK(*st.h_inf_exact == 2);
    REQUIRE(st.alpha_finite_exact.has_value());
    CHECK(*st.alpha_finite_exact == make_rat(Int(15), Int(16)));
    CHECK(st.alpha_finite == doctest::Approx(0.9375));
    REQUIRE(st.alpha_limit.has_value());
    CHECK(*st.alpha_limit == doctest::Approx(1.0));
    CHECK(st.vanishing_ok);
}

TEST_CASE("doubly exponential at depth 12 stays exact despite 2^(2^11) levels") {
    auto real = make_real_lattice(1);
    SequenceSpec s{DoublyExponentialSeq{2, 2, 0}, 12};
    SequenceStats st = stats(s, real);
    CHECK(*st.h_inf_exact == 2);
    // alpha_12 = (2^11 - 1)/2^11
    CHECK(*st.alpha_finite_exact == make_rat(Int((1L << 11) - 1), Int(1L << 11)));
    CHECK(std::fabs(st.alpha_finite - 1.0) < 1e-3);
}

TEST_CASE("geometric exponents over the cantor system") {
    auto md = make_missing_digit(3, {0, 2});
    SequenceSpec s{GeometricExponentsSeq{2, 2, 0}, 5};
    for (int j = 1; j <= 5; ++j)
        CHECK(std::get<ExpLevel>(seq_level(s, md, j)).k == (2L << (j - 1)));
    SequenceStats st = stats(s, md);
    CHECK(*st.h_inf_exact == 2);
    CHECK(*st.alpha_finite_exact == make_rat(Int(30), Int(32)));
    CHECK(*st.alpha_limit == doctest::Approx(1.0));
}

TEST_CASE("explicit powers of two get exact ratios through base normalization") {
    auto real = make_real_lattice(1);
    ExplicitSeq e;
    for (long q : {2, 4, 8, 16}) e.levels.push_back(IntLevel{Int(q)});
    SequenceSpec s{e, 4};
    SequenceStats st = stats(s, real);
    REQUIRE(st.h_inf_exact.has_value());
    CHECK(*st.h_inf_exact == make_rat(Int(4), Int(3)));  // log16/log8
    auto rep = admissible(st, {make_rat(Int(3), Int(2))}, AdmissibilityMode::General);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.reasons.size() == 1);
    CHECK(rep.reasons[0] == "tau_1 >= h_S");
}

TEST_CASE("non-monotone beta is rejected") {
    auto real = make_real_lattice(1);
    ExplicitSeq e;
    for (long q : {4, 2, 8}) e.levels.push_back(IntLevel{Int(q)});
    SequenceSpec s{e, 3};
    CHECK_THROWS_WITH_AS(stats(s, real), "beta not strictly increasing", AdmissibilityError);
}

TEST_CASE("shift drops prefix terms") {
    auto real = make_real_lattice(1);
    ExplicitSeq e;
    for (long q : {2, 4, 16, 256}) e.levels.push_back(IntLevel{Int(q)});
    SequenceSpec s{e, 4};
    SequenceSpec sh = shift(s, 1);
    CHECK(sh.depth == 3);
    CHECK(std::get<IntLevel>(seq_level(sh, real, 1)).q == 4);
    CHECK(std::get<IntLevel>(seq_level(sh, real, 3)).q == 256);

    SequenceSpec d{DoublyExponentialSeq{2, 3, 0}, 6};
    SequenceSpec dsh = shift(d, 2);
    CHECK(std::get<DoublyExponentialSeq>(dsh.form).start == 2);
    CHECK(dsh.depth == 4);

    CHECK_THROWS_AS(shift(s, 4), ValidationError);
    CHECK_THROWS_AS(shift(s, 2), ValidationError);  // depth - t < 3
}

TEST_CASE("shift stability of alpha for closed forms at depth 12") {
    auto real = make_real_lattice(1);
    SequenceSpec s{DoublyExponentialSeq{2, 2, 0}, 12};
    SequenceStats base = stats(s, real);
    SequenceStats shifted = stats(shift(s, 1), real);
    CHECK(std::fabs(base.alpha_finite - shifted.alpha_finite) < 1e-3);

    auto md = make_missing_digit(3, {0, 2});
    SequenceSpec g{GeometricExponentsSeq{2, 2, 0}, 12};
    CHECK(std::fabs(stats(g, md).alpha_finite - stats(shift(g, 1), md).alpha_finite) < 1e-3);

    // larger shifts converge too, with the depth grown accordingly
    SequenceSpec g14{GeometricExponentsSeq{2, 2, 0}, 14};
    CHECK(std::fabs(stats(g14, md).alpha_finite - stats(shift(g14, 2), md).alpha_finite) < 1e-3);
    double gap12 = std::fabs(stats(g, md).alpha_finite - stats(shift(g, 1), md).alpha_finite);
    double gap14 = std::fabs(stats(g14, md).alpha_finite - stats(shift(g14, 1), md).alpha_finite);
    CHECK(gap14 < gap12);
}

TEST_CASE("alpha grows with depth toward the closed-form limit") {
    auto real = make_real_lattice(1);
    double prev = 0;
    for (int depth = 3; depth <= 10; ++depth) {
        SequenceSpec s{DoublyExponentialSeq{2, 3, 0}, depth};
        SequenceStats st = stats(s, real);
        CHECK(st.alpha_finite > prev);
        prev = st.alpha_finite;
        CHECK(st.alpha_finite < *st.alpha_limit + 1e-12);
        CHECK(*st.alpha_limit == doctest::Approx(0.5));
    }
}

TEST_CASE("geometric domination bound on alpha") {
    auto real = make_real_lattice(1);
    for (long b : {2L, 3L, 5L}) {
        SequenceSpec s{DoublyExponentialSeq{3, b, 0}, 9};
        SequenceStats st = stats(s, real);
        double bound = 0;
        for (int i = 1; i < st.depth; ++i) bound += std::pow(st.h_inf, -i);
        CHECK(st.alpha_finite <= bound + 1e-12);
    }
}

TEST_CASE("admissibility modes") {
    auto real = make_real_lattice(1);
    SequenceSpec s{DoublyExponentialSeq{2, 2, 0}, 5};
    SequenceStats st = stats(s, real);  // h = 2
    CHECK(admissible(st, {make_rat(Int(3), Int(2))}, AdmissibilityMode::General).ok);
    CHECK(admissible(st, {make_rat(Int(1), Int(2)), make_rat(Int(4), Int(5))},
                     AdmissibilityMode::RealCorollary)
              .ok);
    auto bad = admissible(st, {make_rat(Int(5), Int(2))}, AdmissibilityMode::General);
    CHECK_FALSE(bad.ok);
    CHECK(bad.reasons[0] == "tau_1 >= h_S");
    // equality with h_S is refused
    CHECK_FALSE(admissible(st, {Rat(2)}, AdmissibilityMode::General).ok);
    CHECK_FALSE(admissible(st, {Rat(1)}, AdmissibilityMode::RealCorollary).ok);
}

TEST_CASE("stats preconditions and warnings") {
    auto real = make_real_lattice(1);
    SequenceSpec shallow{DoublyExponentialSeq{2, 2, 0}, 3};
    SequenceStats st = stats(shallow, real);
    REQUIRE(st.warnings.size() == 1);
    CHECK(st.warnings[0] == "shallow depth");
    SequenceSpec tiny{DoublyExponentialSeq{2, 2, 0}, 2};
    CHECK_THROWS_AS(stats(tiny, real), ValidationError);

    ExplicitSeq ones;
    for (long q : {1, 2, 4}) ones.levels.push_back(IntLevel{Int(q)});
    CHECK_THROWS_AS(stats(SequenceSpec{ones, 3}, real), AdmissibilityError);  // beta(1) = 1
}

TEST_CASE("gaussian explicit sequences fall back to float stats") {
    auto g = make_gaussian();
    ExplicitSeq e;
    e.levels.push_back(GaussLevel{Int(1), Int(1)});   // beta = sqrt(2)
    e.levels.push_back(GaussLevel{Int(2), Int(1)});   // sqrt(5)
    e.levels.push_back(GaussLevel{Int(4), Int(2)});   // sqrt(20)
    e.levels.push_back(GaussLevel{Int(14), Int(0)});  // 14
    SequenceSpec s{e, 4};
    SequenceStats st = stats(s, g);
    CHECK_FALSE(st.h_inf_exact.has_value());
    double l1 = 0.5 * std::log(2), l2 = 0.5 * std::log(5), l3 = 0.5 * std::log(20),
           l4 = std::log(14);
    CHECK(st.h_inf == doctest::Approx(std::min({l2 / l1, l3 / l2, l4 / l3})));
    CHECK(st.alpha_finite == doctest::Approx((l1 + l2 + l3) / l4));
}

TEST_CASE("kind mismatch between sequence form and system") {
    auto md = make_missing_digit(3, {0, 2});
    SequenceSpec s{DoublyExponentialSeq{2, 2, 0}, 5};
    CHECK_THROWS_AS(stats(s, md), ValidationError);
    auto real = make_real_lattice(1);
    SequenceSpec t{GeometricExponentsSeq{2, 2, 0}, 5};
    CHECK_THROWS_AS(stats(t, real), ValidationError);
}
