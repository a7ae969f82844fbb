#pragma once

// Exact scalars of the Gaussian-rational field Q(i).

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace witt {

/// Base class of every error the library throws.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error
{
public:
	DivisionByZero() : Error("division by zero") {}
};

/// Malformed textual scalar.
class ScalarSyntaxError : public Error
{
public:
	using Error::Error;
};

using Integer = mpz_class;
using Rational = mpq_class;

/**
 * GaussianRational: numbers re + im*i with re, im rational.
 *
 * Both parts are kept canonical (lowest terms, positive denominator), so
 * structural equality is value equality and zero has exactly one form.
 */
class GaussianRational
{
public:
	GaussianRational() = default;
	GaussianRational(long v) : re_(v) {}
	GaussianRational(int v) : re_(v) {}
	GaussianRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
	GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im))
	{
		re_.canonicalize();
		im_.canonicalize();
	}

	static GaussianRational fraction(long num, long den)
	{
		if (den == 0)
			throw DivisionByZero();
		return GaussianRational(Rational(num, den));
	}
	static GaussianRational imaginary_unit() { return {Rational(0), Rational(1)}; }

	const Rational &re() const { return re_; }
	const Rational &im() const { return im_; }

	bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
	bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
	bool is_real() const { return sgn(im_) == 0; }
	bool is_integer() const { return is_real() && re_.get_den() == 1; }

	/// Value as a long; throws unless the scalar is an integer that fits.
	long to_long() const
	{
		if (!is_integer() || !re_.get_num().fits_slong_p())
			throw Error("scalar " + to_string() + " is not a machine integer");
		return re_.get_num().get_si();
	}

	GaussianRational operator-() const { return {-re_, -im_}; }

	GaussianRational &operator+=(const GaussianRational &o)
	{
		re_ += o.re_;
		im_ += o.im_;
		return *this;
	}
	GaussianRational &operator-=(const GaussianRational &o)
	{
		re_ -= o.re_;
		im_ -= o.im_;
		return *this;
	}
	GaussianRational &operator*=(const GaussianRational &o)
	{
		if (is_real() && o.is_real())
		{
			re_ *= o.re_;
			return *this;
		}
		Rational r = re_ * o.re_ - im_ * o.im_;
		Rational i = re_ * o.im_ + im_ * o.re_;
		re_ = std::move(r);
		im_ = std::move(i);
		return *this;
	}
	GaussianRational &operator/=(const GaussianRational &o) { return *this *= o.inverse(); }

	GaussianRational inverse() const
	{
		if (is_zero())
			throw DivisionByZero();
		if (is_real())
			return GaussianRational(Rational(1) / re_);
		Rational norm = re_ * re_ + im_ * im_;
		return {re_ / norm, -im_ / norm};
	}

	GaussianRational conj() const { return {re_, -im_}; }

	friend GaussianRational operator+(GaussianRational a, const GaussianRational &b) { return a += b; }
	friend GaussianRational operator-(GaussianRational a, const GaussianRational &b) { return a -= b; }
	friend GaussianRational operator*(GaussianRational a, const GaussianRational &b) { return a *= b; }
	friend GaussianRational operator/(GaussianRational a, const GaussianRational &b) { return a /= b; }

	friend bool operator==(const GaussianRational &a, const GaussianRational &b)
	{
		return a.re_ == b.re_ && a.im_ == b.im_;
	}

	/// Total order (real part first, then imaginary); used for canonical term ordering only.
	friend std::strong_ordering operator<=>(const GaussianRational &a, const GaussianRational &b)
	{
		int c = cmp(a.re_, b.re_);
		if (c == 0)
			c = cmp(a.im_, b.im_);
		return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
	}

	/// Text form: "5", "-1/2", "i", "-2i", "3/2-2i", "1/3+1/2i".
	std::string to_string() const
	{
		if (sgn(im_) == 0)
			return re_.get_str();
		std::string out;
		if (sgn(re_) != 0)
			out = re_.get_str();
		Rational mag = abs(im_);
		if (sgn(im_) < 0)
			out += '-';
		else if (!out.empty())
			out += '+';
		if (mag != 1)
			out += mag.get_str();
		out += 'i';
		return out;
	}

	std::size_t hash() const
	{
		std::size_t h = std::hash<std::string>{}(re_.get_str());
		if (sgn(im_) != 0)
			h ^= std::hash<std::string>{}(im_.get_str()) * 31u;
		return h;
	}

	friend std::ostream &operator<<(std::ostream &os, const GaussianRational &x) { return os << x.to_string(); }

private:
	Rational re_{0};
	Rational im_{0};
};

using Scalar = GaussianRational;

inline GaussianRational inv(const GaussianRational &x) { return x.inverse(); }

namespace detail {

// rat := int['/'int]; returns false if no digits at pos.
inline bool read_rational(std::string_view s, std::size_t &pos, Rational &out)
{
	auto digits = [&](std::size_t &p) {
		std::size_t start = p;
		while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p])))
			++p;
		return std::string(s.substr(start, p - start));
	};
	std::size_t p = pos;
	std::string num = digits(p);
	if (num.empty())
		return false;
	Integer n(num), d(1);
	if (p < s.size() && s[p] == '/')
	{
		++p;
		std::string den = digits(p);
		if (den.empty())
			throw ScalarSyntaxError("missing denominator");
		d = Integer(den);
		if (d == 0)
			throw ScalarSyntaxError("zero denominator");
	}
	out = Rational(n, d);
	out.canonicalize();
	pos = p;
	return true;
}

} // namespace detail

/**
 * Parses the scalar text grammar
 *
 *     [sign] rat [sign [rat] 'i']  |  [sign] [rat] 'i'      rat := int['/'int]
 *
 * Whitespace between tokens is ignored.
 */
inline GaussianRational parse_scalar(std::string_view text)
{
	std::string s;
	for (char c : text)
		if (!std::isspace(static_cast<unsigned char>(c)))
			s += c;
	if (s.empty())
		throw ScalarSyntaxError("empty scalar");

	std::size_t pos = 0;
	auto read_sign = [&]() -> int {
		if (pos < s.size() && (s[pos] == '+' || s[pos] == '-'))
			return s[pos++] == '-' ? -1 : 1;
		return 0;
	};
	auto fail = [&]() -> GaussianRational { throw ScalarSyntaxError("malformed scalar '" + std::string(text) + "'"); };

	int sign1 = read_sign();
	Rational first;
	bool have_first = detail::read_rational(s, pos, first);
	if (pos < s.size() && s[pos] == 'i')
	{
		++pos;
		if (pos != s.size())
			fail();
		Rational im = have_first ? first : Rational(1);
		return {Rational(0), sign1 < 0 ? Rational(-im) : im};
	}
	if (!have_first)
		fail();
	Rational re = sign1 < 0 ? Rational(-first) : first;
	if (pos == s.size())
		return GaussianRational(re);

	int sign2 = read_sign();
	if (sign2 == 0)
		fail();
	Rational second;
	bool have_second = detail::read_rational(s, pos, second);
	if (pos >= s.size() || s[pos] != 'i')
		fail();
	++pos;
	if (pos != s.size())
		fail();
	Rational im = have_second ? second : Rational(1);
	return {re, sign2 < 0 ? Rational(-im) : im};
}

} // namespace witt

template <>
struct std::hash<witt::GaussianRational>
{
	std::size_t operator()(const witt::GaussianRational &x) const { return x.hash(); }
};
