#pragma once

// Built-in algebras: witt, w_ab, w_abs (s = 1/2), wn_g, hwn_g.

#include "witt/algebra.hpp"

#include <map>
#include <string>
#include <vector>

namespace witt {

/// Catalog parameters. Generators are only meaningful for wn_g / hwn_g.
struct CatalogParams
{
	std::map<std::string, Scalar> values;
	std::vector<Scalar> generators;

	CatalogParams &set(const std::string &key, const Scalar &v)
	{
		values[key] = v;
		return *this;
	}
	CatalogParams &gen(const Scalar &g)
	{
		generators.push_back(g);
		return *this;
	}
};

inline const std::vector<std::string> &catalog_names()
{
	static const std::vector<std::string> names{"witt", "w_ab", "w_abs", "wn_g", "hwn_g"};
	return names;
}

namespace detail {

inline Poly pv(int k) { return Poly::var(k); }
inline Poly alpha() { return pv(poly_var::alpha_left); }
inline Poly beta() { return pv(poly_var::alpha_right); }
inline Poly idx_i() { return pv(poly_var::i_left); }
inline Poly idx_j() { return pv(poly_var::i_right); }
inline Poly param(int k) { return pv(poly_var::first_param + k); }

inline FamilyDecl integer_family(std::string name, Rational offset = Rational(0))
{
	return {std::move(name), std::move(offset), Scalar(0), Scalar(1)};
}
inline FamilyDecl group_family(std::string name) { return {std::move(name), Rational(0), Scalar(1), Scalar(0)}; }

inline RuleTerm term(int target, Poly coeff, long shift = 0, std::map<std::string, long> shift_params = {})
{
	return {target, Scalar(), IndexShift{shift, std::move(shift_params)}, std::move(coeff)};
}

inline Rule witt_rule() { return {0, 0, {term(0, idx_j() - idx_i())}}; }

// [L(m), I(n)] = (n + b*m + a) I(m+n); parameters ordered (a, b).
inline Rule w_ab_rule() { return {0, 1, {term(1, idx_j() + param(1) * idx_i() + param(0))}}; }

inline Rule wn_rule(int target = 0)
{
	return {0, 0, {term(target, beta() - alpha()), term(target, idx_j() - idx_i(), 0, {{"n", 1}})}};
}

} // namespace detail

/**
 * Builds a catalog algebra.
 *
 *   witt            [L(m), L(n)] = (n-m) L(m+n)
 *   w_ab   (a, b)   plus [L(m), I(n)] = (n+bm+a) I(m+n)
 *   w_abs  (a, b)   W(a,b,1/2): plus Y with offset 1/2,
 *                   [L(m), Y(n)] = (n + 1/2 + ((b-1)m + a)/2) Y(m+n), [Y(m), Y(n)] = (n-m) I(m+n+1)
 *   wn_g   (n, G)   [L(x,i), L(y,j)] = (y-x) L(x+y,i+j) + (j-i) L(x+y,i+j+n)
 *   hwn_g  (n, G)   plus [L(x,i), H(y,j)] = y H(x+y,i+j) + j H(x+y,i+j+n), [H, H] = 0
 */
inline AlgebraDef catalog(const std::string &name, const CatalogParams &p)
{
	using namespace detail;
	auto need = [&](const std::string &key) -> Scalar {
		auto it = p.values.find(key);
		if (it == p.values.end())
			throw Error("catalog algebra '" + name + "' requires parameter '" + key + "'");
		return it->second;
	};
	auto need_integer = [&](const std::string &key) -> Scalar {
		Scalar v = need(key);
		if (!v.is_integer())
			throw Error("parameter '" + key + "' must be an integer, got " + v.to_string());
		return v;
	};
	auto no_generators = [&] {
		if (!p.generators.empty())
			throw Error("catalog algebra '" + name + "' takes no group generators");
	};
	auto need_generators = [&] {
		if (p.generators.empty())
			throw Error("catalog algebra '" + name + "' requires at least one group generator");
	};

	if (name == "witt")
	{
		no_generators();
		return AlgebraDef("witt", {}, {}, {integer_family("L")}, {witt_rule()});
	}
	if (name == "w_ab")
	{
		no_generators();
		Parameters params{{"a", need("a")}, {"b", need("b")}};
		return AlgebraDef("w_ab", params, {}, {integer_family("L"), integer_family("I")}, {witt_rule(), w_ab_rule()});
	}
	if (name == "w_abs")
	{
		no_generators();
		Parameters params{{"a", need("a")}, {"b", need("b")}};
		const Scalar half = Scalar::fraction(1, 2);
		// n + 1/2 + ((b-1)m + a)/2
		Poly ly = idx_j() + Poly(half) + Poly(half) * ((param(1) - Poly(1)) * idx_i() + param(0));
		Rule LY{0, 2, {term(2, ly)}};
		Rule YY{2, 2, {term(1, idx_j() - idx_i(), 1)}};
		return AlgebraDef("w_abs", params, {},
		                  {integer_family("L"), integer_family("I"), integer_family("Y", Rational(1, 2))},
		                  {witt_rule(), w_ab_rule(), LY, YY});
	}
	if (name == "wn_g" || name == "hwn_g")
	{
		need_generators();
		Parameters params{{"n", need_integer("n")}};
		if (name == "wn_g")
			return AlgebraDef("wn_g", params, p.generators, {group_family("L")}, {wn_rule()});
		Rule LH{0, 1, {term(1, beta()), term(1, idx_j(), 0, {{"n", 1}})}};
		Rule HH{1, 1, {}};
		return AlgebraDef("hwn_g", params, p.generators, {group_family("L"), group_family("H")},
		                  {wn_rule(), LH, HH});
	}
	throw Error("unknown catalog algebra '" + name + "'");
}

/// Commonly used shortcuts.
inline AlgebraDef make_witt() { return catalog("witt", {}); }
inline AlgebraDef make_w_ab(const Scalar &a, const Scalar &b) { return catalog("w_ab", CatalogParams{}.set("a", a).set("b", b)); }
inline AlgebraDef make_w_abs(const Scalar &a, const Scalar &b)
{
	return catalog("w_abs", CatalogParams{}.set("a", a).set("b", b));
}
inline AlgebraDef make_wn_g(long n, std::vector<Scalar> gens = {Scalar(1)})
{
	CatalogParams p;
	p.set("n", Scalar(n));
	p.generators = std::move(gens);
	return catalog("wn_g", p);
}
inline AlgebraDef make_hwn_g(long n, std::vector<Scalar> gens = {Scalar(1)})
{
	CatalogParams p;
	p.set("n", Scalar(n));
	p.generators = std::move(gens);
	return catalog("hwn_g", p);
}

} // namespace witt
