#include "doctest.h"
#include "dynres/rational.hpp"

using namespace dynres;

TEST_CASE("rationals reduce and print canonically") {
    CHECK(rat(6, 4) == rat(3, 2));
    CHECK(rat_str(rat(6, 4)) == "3/2");
    CHECK(rat_str(rat(-10, 5)) == "-2");
    CHECK(rat_str(Rat(0)) == "0");
}

TEST_CASE("parsing round-trips and rejects garbage") {
    CHECK(rat_parse("22/7") == rat(22, 7));
    CHECK(rat_parse("-3") == rat(-3));
    CHECK(rat_str(rat_parse("-36/24")) == "-3/2");
    CHECK_THROWS_AS(rat_parse("x"), ValidationError);
    CHECK_THROWS_AS(rat_parse(""), ValidationError);
}

TEST_CASE("integer detection") {
    CHECK(is_integer(rat(8, 2)));
    CHECK(!is_integer(rat(1, 3)));
}

TEST_CASE("reduction mod p inverts denominators") {
    // 1/2 mod 7: 2 * 4 = 8 = 1 (mod 7).
    CHECK(mod_p(rat(1, 2), 7) == 4);
    CHECK(mod_p(rat(-1), 7) == 6);
    CHECK(mod_p(rat(3, 5), 32003) == ((3 * mod_p(rat(1, 5), 32003)) % 32003));
    CHECK_THROWS_AS(mod_p(rat(1, 7), 7), BadReductionError);
}

TEST_CASE("factorials are exact") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(factorial(20) == rat_parse("2432902008176640000"));
}
