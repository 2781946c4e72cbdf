#include <doctest.h>

#include <stdexcept>

#include "rscache/rational.hpp"

using rscache::Rational;

TEST_CASE("rational normalizes on construction") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0, 7).den() == 1);
    CHECK(Rational(6).den() == 1);
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational arithmetic is exact") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(2, 3) / Rational(4, 3) == Rational(1, 2));
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::invalid_argument);

    // The scheme identity r_avg * t = |E| must hold exactly.
    Rational r_avg(224220, 120); // a K16-scale value
    CHECK(r_avg * Rational(120) == Rational(224220));
}

TEST_CASE("rational comparisons") {
    CHECK(Rational(1, 2) < Rational(2, 3));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    CHECK(Rational(7, 1) > Rational(15, 16));
    CHECK(Rational(1, 2) <= Rational(1, 2));
    CHECK(Rational(1, 2) >= Rational(1, 2));
}

TEST_CASE("rational rendering") {
    CHECK(Rational(3, 6).str() == "1/2");
    CHECK(Rational(4, 2).str() == "2");
    CHECK(Rational(-3, 6).str() == "-1/2");
    CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
    CHECK(Rational(15, 2).to_double() == doctest::Approx(7.5));
}

TEST_CASE("rational guards 64-bit overflow") {
    Rational big(std::numeric_limits<std::int64_t>::max(), 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    // Reduction keeps in-range results legal even with big operands.
    CHECK(big / big == Rational(1));
}
