#include <stdexcept>

#include "doctest.h"

#include "diversity/scalar.hpp"

using diversity::Scalar;

TEST_SUITE("scalar") {

TEST_CASE("rational parsing normalises") {
    CHECK(Scalar::parse("3/6").str() == "1/2");
    CHECK(Scalar::parse("4").str() == "4");
    CHECK(Scalar::parse("-8/4").str() == "-2");
    CHECK(Scalar::parse(" 7/3 ").exact());
}

TEST_CASE("decimals need opting in and come out inexact") {
    CHECK_THROWS_AS(Scalar::parse("1.7"), std::invalid_argument);
    const Scalar d = Scalar::parse("1.7", true);
    CHECK(d == Scalar(17, 10));
    CHECK_FALSE(d.exact());
    CHECK(Scalar::parse("-2e-3", true) == Scalar(-1, 500));
}

TEST_CASE("malformed numbers are rejected") {
    CHECK_THROWS(Scalar::parse(""));
    CHECK_THROWS(Scalar::parse("1/"));
    CHECK_THROWS(Scalar::parse("abc"));
    CHECK_THROWS(Scalar::parse("1/0"));
    CHECK_THROWS(Scalar::parse("2/3x"));
}

TEST_CASE("exactness propagates through arithmetic") {
    const Scalar a(1, 3);
    const Scalar b = Scalar::from_double(0.5);
    CHECK((a + a).exact());
    CHECK((a * 3) == Scalar(1));
    CHECK_FALSE((a + b).exact());
    CHECK_FALSE((a / b).exact());
    CHECK((a + b) == Scalar(5, 6));
}

TEST_CASE("from_double keeps the binary value") {
    const Scalar tenth = Scalar::from_double(0.1);
    CHECK_FALSE(tenth == Scalar(1, 10));
    CHECK(tenth.to_double() == 0.1);
    CHECK_THROWS_AS(Scalar::from_double(1.0 / 0.0), std::domain_error);
}

TEST_CASE("division by zero throws") {
    CHECK_THROWS_AS(Scalar(1) / Scalar(0), std::domain_error);
    CHECK_THROWS_AS(Scalar(0).reciprocal(), std::domain_error);
    CHECK_THROWS_AS(Scalar(1, 0), std::domain_error);
}

TEST_CASE("ordering and helpers") {
    CHECK(Scalar(51, 22) > Scalar(2));
    CHECK(min(Scalar(1, 2), Scalar(1, 3)) == Scalar(1, 3));
    CHECK(max(Scalar(1, 2), Scalar(1, 3)) == Scalar(1, 2));
    CHECK(Scalar(-3, 4).abs() == Scalar(3, 4));
    CHECK(approx_equal(Scalar(1), Scalar(1) + Scalar(1, 1000000000000L), 1e-9));
    CHECK_FALSE(approx_equal(Scalar(1), Scalar(1) + Scalar(1, 1000000000000L), 0.0));
}

}
