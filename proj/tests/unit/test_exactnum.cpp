#include <catch_amalgamated.hpp>

#include <random>

#include "curlmat/exactnum.hpp"

using namespace curlmat;

namespace {

ExactScalar sq(long long n) { return ExactScalar::sqrt(Rational(n)); }
ExactScalar frac(long long n, long long d) { return ExactScalar::rational(n, d); }
const ExactScalar I = ExactScalar::i();

// Random element with small rational coefficients and at most one radicand
// per part, so inverses exist.
ExactScalar random_single(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4), rad(0, 4);
    const std::uint64_t radicands[] = {1, 2, 3, 5, 6};
    auto part = [&] {
        detail::Terms t;
        const int n = num(rng);
        if (n != 0) t.push_back({Rational(n, den(rng)), radicands[rad(rng)]});
        return t;
    };
    return ExactScalar::from_terms(part(), part());
}

// Random element with several radicands in each part.
ExactScalar random_multi(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    detail::Terms re, im;
    for (std::uint64_t d : {1, 2, 3, 7}) {
        re.push_back({Rational(num(rng), den(rng)), d});
        im.push_back({Rational(num(rng), den(rng)), d});
    }
    return ExactScalar::from_terms(re, im);
}

} // namespace

TEST_CASE("normalize_radical extracts square factors")
{
    CHECK(normalize_radical(Rational(1), 8) == Radical{Rational(2), 2});
    CHECK(normalize_radical(Rational(3, 2), 1) == Radical{Rational(3, 2), 1});
    CHECK(normalize_radical(Rational(1, 2), 24) == Radical{Rational(1), 6});
    CHECK(normalize_radical(Rational(5), 72) == Radical{Rational(30), 2});
    CHECK_FALSE(normalize_radical(Rational(0), 5).has_value());
    CHECK_FALSE(normalize_radical(Rational(7), 0).has_value());
}

TEST_CASE("squarefree_split returns square root of the square part and the squarefree rest")
{
    CHECK(squarefree_split(1) == std::pair<std::uint64_t, std::uint64_t>{1, 1});
    CHECK(squarefree_split(12) == std::pair<std::uint64_t, std::uint64_t>{2, 3});
    CHECK(squarefree_split(360) == std::pair<std::uint64_t, std::uint64_t>{6, 10});
    CHECK(squarefree_split(97) == std::pair<std::uint64_t, std::uint64_t>{1, 97});
    CHECK(squarefree_split(0) == std::pair<std::uint64_t, std::uint64_t>{0, 0});
    // trial-division oracle
    for (std::uint64_t d = 1; d < 2000; ++d) {
        const auto [s, r] = squarefree_split(d);
        REQUIRE(s * s * r == d);
        for (std::uint64_t p = 2; p * p <= r; ++p) REQUIRE(r % (p * p) != 0);
    }
}

TEST_CASE("addition")
{
    CHECK(sq(2) * frac(1, 2) + sq(2) * frac(1, 2) == sq(2));
    CHECK((sq(2) + (-sq(2))).is_zero());
    CHECK((1 + I * sq(3)) + (2 - I * sq(3)) == ExactScalar(3));
    CHECK(add(sq(8), sq(2)) == 3 * sq(2));
}

TEST_CASE("multiplication")
{
    CHECK(sq(2) * sq(2) == ExactScalar(2));
    CHECK((-I) * I == ExactScalar(1));
    CHECK(sq(6) * sq(2) == 2 * sq(3));
    CHECK(mul(1 + sq(2), 1 - sq(2)) == ExactScalar(-1));
    CHECK(I * I == ExactScalar(-1));
    CHECK(sq(15) * sq(35) == 5 * sq(21));
}

TEST_CASE("sqrt of rationals is canonical")
{
    CHECK(ExactScalar::sqrt(Rational(1, 2)) == frac(1, 2) * sq(2));
    CHECK(ExactScalar::sqrt(Rational(2, 3)) == frac(1, 3) * sq(6));
    CHECK(ExactScalar::sqrt(Rational(9, 4)) == frac(3, 2));
    CHECK(ExactScalar::sqrt(Rational(0)).is_zero());
    CHECK(ExactScalar::sqrt(Rational(-1)) == I);
    CHECK(ExactScalar::sqrt(Rational(-8)) == 2 * I * sq(2));
}

TEST_CASE("conjugation")
{
    CHECK(conj(I) == -I);
    CHECK(conj(frac(3, 5)) == frac(3, 5));
    CHECK(conj(sq(2) * frac(1, 2) - I * sq(6)) == sq(2) * frac(1, 2) + I * sq(6));
}

TEST_CASE("inverse and division")
{
    CHECK((1 + I).inverse() == frac(1, 2) * (1 - I));
    CHECK(sq(2).inverse() == frac(1, 2) * sq(2));
    CHECK(ExactScalar(6) / sq(3) == 2 * sq(3));
    CHECK_THROWS_AS(ExactScalar().inverse(), std::domain_error);
    CHECK_THROWS_AS((sq(2) + sq(3)).inverse(), std::domain_error);
}

TEST_CASE("queries and parts")
{
    const ExactScalar z = frac(1, 2) * sq(2) - I * sq(3);
    CHECK_FALSE(z.is_real());
    CHECK_FALSE(z.is_rational());
    CHECK(z.real_part() == frac(1, 2) * sq(2));
    CHECK(z.imag_part() == -sq(3));
    CHECK(frac(7, 3).is_rational());
    CHECK(frac(7, 3).to_rational() == Rational(7, 3));
    CHECK_THROWS(z.to_rational());
    const auto c = z.to_complex();
    CHECK(c.real() == Catch::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(c.imag() == Catch::Approx(-std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("canonical string forms")
{
    CHECK(to_string(ExactScalar()) == "0");
    CHECK(to_string(frac(-3, 4)) == "(-3/4)");
    CHECK(to_string(frac(1, 2) * sq(2) - I * sq(3)) == "(1/2)*sqrt(2) + i*(-1)*sqrt(3)");
    CHECK(to_string(I) == "i*1");
    CHECK(to_latex(frac(1, 2) * sq(2)) == "\\frac{\\sqrt{2}}{2}");
}

TEST_CASE("field axioms on random elements")
{
    const std::uint64_t seed = 20240611;
    INFO("seed " << seed);
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 200; ++trial) {
        const ExactScalar a = random_multi(rng), b = random_multi(rng), c = random_multi(rng);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * b == b * a);
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE((a + (-a)).is_zero());
        REQUIRE(conj(conj(a)) == a);
        REQUIRE(conj(a * b) == conj(a) * conj(b));
        const auto fa = a.to_complex(), fb = b.to_complex();
        REQUIRE(std::abs((a * b).to_complex() - fa * fb) <= 1e-12 * (1 + std::abs(fa * fb)));

        const ExactScalar s = random_single(rng);
        if (!s.is_zero()) REQUIRE(s * s.inverse() == ExactScalar(1));
    }
}
