#pragma once

// Sparse multivariate polynomials with Gaussian-rational coefficients.
// Variables are plain indices; naming is the caller's business.

#include "witt/exactnum.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace witt {

class Poly
{
public:
	/// Exponent vector with no trailing zeros.
	using Monomial = std::vector<int>;

	Poly() = default;
	Poly(const Scalar &c)
	{
		if (!c.is_zero())
			terms_.emplace(Monomial{}, c);
	}
	Poly(long c) : Poly(Scalar(c)) {}

	static Poly var(int index)
	{
		Monomial m(index + 1, 0);
		m[index] = 1;
		Poly p;
		p.terms_.emplace(std::move(m), Scalar(1));
		return p;
	}

	const std::map<Monomial, Scalar> &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
	Scalar constant_term() const
	{
		auto it = terms_.find(Monomial{});
		return it == terms_.end() ? Scalar() : it->second;
	}

	/// Total degree; -1 for the zero polynomial.
	int degree() const
	{
		int d = -1;
		for (auto &[m, c] : terms_)
		{
			int s = 0;
			for (int e : m)
				s += e;
			d = std::max(d, s);
		}
		return d;
	}

	/// Coefficient of the degree-1 monomial in variable `index`.
	Scalar linear_coeff(int index) const
	{
		Monomial m(index + 1, 0);
		m[index] = 1;
		auto it = terms_.find(m);
		return it == terms_.end() ? Scalar() : it->second;
	}

	bool uses_var(int index) const
	{
		for (auto &[m, c] : terms_)
			if (index < static_cast<int>(m.size()) && m[index] != 0)
				return true;
		return false;
	}

	Poly &operator+=(const Poly &o)
	{
		for (auto &[m, c] : o.terms_)
			add_term(m, c);
		return *this;
	}
	Poly &operator-=(const Poly &o)
	{
		for (auto &[m, c] : o.terms_)
			add_term(m, -c);
		return *this;
	}
	Poly operator-() const
	{
		Poly r;
		for (auto &[m, c] : terms_)
			r.terms_.emplace(m, -c);
		return r;
	}
	friend Poly operator+(Poly a, const Poly &b) { return a += b; }
	friend Poly operator-(Poly a, const Poly &b) { return a -= b; }
	friend Poly operator*(const Poly &a, const Poly &b)
	{
		Poly r;
		for (auto &[ma, ca] : a.terms_)
			for (auto &[mb, cb] : b.terms_)
			{
				Monomial m(std::max(ma.size(), mb.size()), 0);
				for (std::size_t k = 0; k < ma.size(); ++k)
					m[k] += ma[k];
				for (std::size_t k = 0; k < mb.size(); ++k)
					m[k] += mb[k];
				r.add_term(m, ca * cb);
			}
		return r;
	}
	friend bool operator==(const Poly &a, const Poly &b) { return a.terms_ == b.terms_; }

	/// Evaluates with `values[k]` substituted for variable k.
	Scalar eval(std::span<const Scalar> values) const
	{
		Scalar sum;
		for (auto &[m, c] : terms_)
		{
			Scalar t = c;
			for (std::size_t k = 0; k < m.size() && !t.is_zero(); ++k)
				for (int e = 0; e < m[k]; ++e)
					t *= values[k];
			sum += t;
		}
		return sum;
	}

	/// Substitutes constants for variables listed in `values` (index -> value), keeping the rest.
	Poly substitute(const std::map<int, Scalar> &values) const
	{
		Poly r;
		for (auto &[m, c] : terms_)
		{
			Scalar t = c;
			Monomial rest = m;
			for (auto &[idx, v] : values)
				if (idx < static_cast<int>(rest.size()))
				{
					for (int e = 0; e < rest[idx]; ++e)
						t *= v;
					rest[idx] = 0;
				}
			trim(rest);
			r.add_term(rest, t);
		}
		return r;
	}

	/// Renames variables: variable k becomes `mapping[k]`.
	Poly remap(std::span<const int> mapping) const
	{
		Poly r;
		for (auto &[m, c] : terms_)
		{
			Poly t(c);
			for (std::size_t k = 0; k < m.size(); ++k)
				for (int e = 0; e < m[k]; ++e)
					t = t * var(mapping[k]);
			r += t;
		}
		return r;
	}

	/// Renders with the given variable names, e.g. "-m + n" or "(1/2)*a*m".
	std::string to_string(std::span<const std::string> names) const
	{
		if (terms_.empty())
			return "0";
		std::string out;
		bool first = true;
		for (auto &[m, c] : terms_)
		{
			Scalar coeff = c;
			bool negative = coeff.is_real() && sgn(coeff.re()) < 0;
			if (negative)
				coeff = -coeff;
			if (!first)
				out += negative ? " - " : " + ";
			else if (negative)
				out += "-";
			first = false;
			std::string vars;
			for (std::size_t k = 0; k < m.size(); ++k)
				for (int e = 0; e < m[k]; ++e)
				{
					if (!vars.empty())
						vars += "*";
					vars += names[k];
				}
			if (vars.empty())
				out += literal(coeff);
			else if (coeff.is_one())
				out += vars;
			else
				out += literal(coeff) + "*" + vars;
		}
		return out;
	}

	/// A scalar spelled so that it reparses as a single factor of a DSL expression.
	static std::string literal(const Scalar &c)
	{
		if (c.is_integer() && sgn(c.re()) >= 0)
			return c.to_string();
		if (c.is_real())
			return "(" + c.re().get_str() + ")";
		std::string out = "(";
		if (sgn(c.re()) != 0)
			out += c.re().get_str() + (sgn(c.im()) < 0 ? " - " : " + ");
		else if (sgn(c.im()) < 0)
			out += "-";
		Rational mag = abs(c.im());
		if (mag != 1)
			out += mag.get_str() + "*";
		return out + "1i)";
	}

private:
	static void trim(Monomial &m)
	{
		while (!m.empty() && m.back() == 0)
			m.pop_back();
	}
	void add_term(Monomial m, const Scalar &c)
	{
		trim(m);
		if (c.is_zero())
			return;
		auto [it, inserted] = terms_.try_emplace(std::move(m), c);
		if (!inserted)
		{
			it->second += c;
			if (it->second.is_zero())
				terms_.erase(it);
		}
	}

	std::map<Monomial, Scalar> terms_;
};

} // namespace witt
