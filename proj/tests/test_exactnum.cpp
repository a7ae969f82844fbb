#include "witt/exactnum.hpp"
#include "witt/poly.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace witt;

namespace {

Scalar q(long n, long d = 1) { return Scalar::fraction(n, d); }
Scalar gi(long rn, long rd, long in, long id) { return {Rational(rn, rd), Rational(in, id)}; }

Scalar random_scalar(std::mt19937 &rng)
{
	std::uniform_int_distribution<long> num(-9, 9), den(1, 7);
	return gi(num(rng), den(rng), num(rng), den(rng));
}

} // namespace

TEST(Scalar, Arithmetic)
{
	EXPECT_EQ(q(1, 2) + q(1, 3), q(5, 6));
	EXPECT_EQ(Scalar::imaginary_unit() * Scalar::imaginary_unit(), Scalar(-1));
	// (1+2i)(3-i) = 5 + 5i
	EXPECT_EQ(gi(1, 1, 2, 1) * gi(3, 1, -1, 1), gi(5, 1, 5, 1));
	// 1/(1+i) = (1-i)/2
	EXPECT_EQ(gi(1, 1, 1, 1).inverse(), gi(1, 2, -1, 2));
	EXPECT_EQ(q(6, 4), q(3, 2));
	EXPECT_TRUE(q(4, 2).is_integer());
	EXPECT_EQ(q(-8, 2).to_long(), -4);
}

TEST(Scalar, DivisionByZero)
{
	EXPECT_THROW(Scalar().inverse(), DivisionByZero);
	EXPECT_THROW(q(1) / Scalar(), DivisionByZero);
	EXPECT_THROW(Scalar::fraction(1, 0), DivisionByZero);
}

TEST(Scalar, Formatting)
{
	EXPECT_EQ(gi(3, 2, -2, 1).to_string(), "3/2-2i");
	EXPECT_EQ(Scalar::imaginary_unit().to_string(), "i");
	EXPECT_EQ((-Scalar::imaginary_unit()).to_string(), "-i");
	EXPECT_EQ(Scalar().to_string(), "0");
	EXPECT_EQ(q(-7, 3).to_string(), "-7/3");
}

TEST(Scalar, Parse)
{
	EXPECT_EQ(parse_scalar("3/2-2i"), gi(3, 2, -2, 1));
	EXPECT_EQ(parse_scalar("i"), Scalar::imaginary_unit());
	EXPECT_EQ(parse_scalar("-i"), -Scalar::imaginary_unit());
	EXPECT_EQ(parse_scalar(" 1 / 2 + 1/3 i "), gi(1, 2, 1, 3));
	EXPECT_EQ(parse_scalar("-4"), q(-4));
	EXPECT_EQ(parse_scalar("2/4i"), gi(0, 1, 1, 2));
	for (const char *bad : {"1//2", "", "i2", "1+2", "1/0", "abc", "1-2i3"})
		EXPECT_THROW(parse_scalar(bad), ScalarSyntaxError) << bad;
}

TEST(Scalar, FieldAxiomsSampled)
{
	std::mt19937 rng(7);
	for (int k = 0; k < 300; ++k)
	{
		Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
		EXPECT_EQ(a * (b + c), a * b + a * c);
		EXPECT_EQ((a * b) * c, a * (b * c));
		EXPECT_EQ(a + b, b + a);
		if (!a.is_zero())
			EXPECT_EQ(a * a.inverse(), Scalar(1));
		EXPECT_EQ(parse_scalar(a.to_string()), a);
		EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
	}
}

TEST(Scalar, OrderAndHash)
{
	EXPECT_LT(q(1), q(2));
	EXPECT_LT(gi(1, 1, 0, 1), gi(1, 1, 1, 1));
	EXPECT_EQ(std::hash<Scalar>{}(q(2, 4)), std::hash<Scalar>{}(q(1, 2)));
}

TEST(Poly, EvalAndAlgebra)
{
	Poly x = Poly::var(0), y = Poly::var(1);
	Poly p = (x + y) * (x - y);
	std::vector<Scalar> v{q(3), q(2)};
	EXPECT_EQ(p.eval(v), q(5));
	EXPECT_EQ(p.degree(), 2);
	EXPECT_TRUE((p - (x * x - y * y)).is_zero());
	EXPECT_EQ(p.substitute({{1, q(1)}}), x * x - Poly(1));
	EXPECT_EQ((Poly(q(2)) * x + Poly(3)).linear_coeff(0), q(2));
}

TEST(Poly, Render)
{
	std::vector<std::string> names{"m", "n"};
	EXPECT_EQ((Poly::var(1) - Poly::var(0)).to_string(names), "n - m");
	EXPECT_EQ(Poly(q(1, 2)).to_string(names), "(1/2)");
	EXPECT_EQ(Poly::literal(gi(0, 1, -1, 1)), "(-1i)");
	EXPECT_EQ(Poly::literal(gi(3, 2, -2, 1)), "(3/2 - 2*1i)");
	EXPECT_EQ(Poly::literal(q(4)), "4");
}
