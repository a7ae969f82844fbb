#pragma once

// Commutative products, mutations and transposed Poisson checks.
//
// A transposed Poisson structure on a Lie algebra is a commutative associative
// product with 2z.[x,y] = [z.x, y] + [x, z.y].

#include "witt/halfderiv.hpp"

#include <memory>
#include <optional>

namespace witt {

/// Anything with a bilinear product on basis elements.
template <class P>
concept BasisProduct = requires(const P &p, const BasisIndex &x, const BasisIndex &y) {
	{ p.mul_basis(x, y) } -> std::convertible_to<Element>;
};

template <BasisProduct P>
Element mul(const P &p, const Element &x, const Element &y)
{
	Element out;
	for (auto &[bx, cx] : x)
		for (auto &[by, cy] : y)
			out.add_scaled(p.mul_basis(bx, by), cx * cy);
	return out;
}

/**
 * Commutative product given by rules in the bracket format. Each family pair is
 * declared once; the other ordering is the same rule (symmetric).
 */
class CommProduct
{
public:
	CommProduct() = default;
	CommProduct(const AlgebraDef &alg, std::vector<Rule> rules, std::string name = "product")
	    : name_(std::move(name)),
	      rules_(std::make_shared<const RuleSystem>(alg.families(), alg.parameters(), std::move(rules), Symmetry::symmetric,
	                                                alg.has_group()))
	{
	}

	const std::string &name() const { return name_; }
	const RuleSystem &rule_system() const { return *rules_; }

	Element mul_basis(const BasisIndex &x, const BasisIndex &y) const
	{
		const int nf = static_cast<int>(rules_->families().size());
		if (x.family < 0 || x.family >= nf || y.family < 0 || y.family >= nf)
			throw Error("product applied to an unknown family");
		return rules_->apply(x, y);
	}
	Element mul(const Element &x, const Element &y) const { return witt::mul(*this, x, y); }

private:
	std::string name_;
	std::shared_ptr<const RuleSystem> rules_;
};

/// The product with no rules.
inline CommProduct zero_product(const AlgebraDef &alg) { return CommProduct(alg, {}, "zero"); }

/**
 * The commutative algebra W on the families of `alg`: the first family must be L with
 * L.L = L (indices added), L.F = F for every other family F, and Y.Y = I with an
 * extra index 1 when both I and Y are present. All other products vanish.
 */
inline CommProduct plain_w(const AlgebraDef &alg)
{
	const auto &fams = alg.families();
	if (fams.empty() || fams[0].name != "L")
		throw Error("plain W product needs L as the first family");
	auto one = [](int target, long shift = 0) { return RuleTerm{target, Scalar(), IndexShift{shift, {}}, Poly(1)}; };
	std::vector<Rule> rules;
	for (int f = 0; f < static_cast<int>(fams.size()); ++f)
		rules.push_back({0, f, {one(f)}});
	int I = alg.family_id("I"), Y = alg.family_id("Y");
	if (I >= 0 && Y >= 0)
		rules.push_back({Y, Y, {one(I, 1)}});
	return CommProduct(alg, std::move(rules), "plain-W");
}

/// x o y = (x.w).y over a commutative base product.
class MutationProduct
{
public:
	MutationProduct(CommProduct base, Element w) : base_(std::move(base)), w_(std::move(w)) {}

	const CommProduct &base() const { return base_; }
	const Element &w() const { return w_; }

	Element mul_basis(const BasisIndex &x, const BasisIndex &y) const
	{
		Element xw;
		for (auto &[b, c] : w_)
			xw.add_scaled(base_.mul_basis(x, b), c);
		Element out;
		for (auto &[b, c] : xw)
			out.add_scaled(base_.mul_basis(b, y), c);
		return out;
	}
	Element mul(const Element &x, const Element &y) const { return witt::mul(*this, x, y); }

private:
	CommProduct base_;
	Element w_;
};

// ---------------------------------------------------------------------------
// Identity checks

struct Witness
{
	std::vector<BasisIndex> tuple;
	Element residual;
};

struct IdentityCheck
{
	bool holds = true;
	std::optional<Witness> witness;
	std::size_t checked = 0;
};

struct TpsReport
{
	IdentityCheck commutative;
	IdentityCheck associative;
	IdentityCheck compatible;
	IdentityCheck leibniz;
	/// Commutative, associative and compatible.
	bool ok() const { return commutative.holds && associative.holds && compatible.holds; }
};

/// 2z.[x,y] - [z.x, y] - [x, z.y].
template <BasisProduct P>
Element compat_residual(const P &p, const AlgebraDef &alg, const Element &x, const Element &y, const Element &z)
{
	Element out = mul(p, z, alg.bracket_unchecked(x, y));
	out *= Scalar(2);
	out -= alg.bracket_unchecked(mul(p, z, x), y);
	out -= alg.bracket_unchecked(x, mul(p, z, y));
	return out;
}

/// [x.y, z] - x.[y,z] - [x,z].y.
template <BasisProduct P>
Element leibniz_residual(const P &p, const AlgebraDef &alg, const Element &x, const Element &y, const Element &z)
{
	Element out = alg.bracket_unchecked(mul(p, x, y), z);
	out -= mul(p, x, alg.bracket_unchecked(y, z));
	out -= mul(p, alg.bracket_unchecked(x, z), y);
	return out;
}

namespace detail {

inline Element basis_element(const BasisIndex &b)
{
	Element e;
	e.add(b, Scalar(1));
	return e;
}

inline void record(IdentityCheck &chk, std::vector<BasisIndex> tuple, Element residual)
{
	++chk.checked;
	if (residual.is_zero() || !chk.holds)
		return;
	chk.holds = false;
	chk.witness = Witness{std::move(tuple), std::move(residual)};
}

template <BasisProduct P>
IdentityCheck scan_leibniz(const P &p, const AlgebraDef &alg, const std::vector<BasisIndex> &basis)
{
	IdentityCheck chk;
	for (auto &x : basis)
		for (auto &y : basis)
		{
			Element xy = p.mul_basis(x, y);
			for (auto &z : basis)
			{
				Element r = alg.bracket_unchecked(xy, basis_element(z));
				Element yz = alg.bracket_basis(y, z);
				for (auto &[b, c] : yz)
					r.add_scaled(p.mul_basis(x, b), -c);
				Element xz = alg.bracket_basis(x, z);
				for (auto &[b, c] : xz)
					r.add_scaled(p.mul_basis(b, y), -c);
				record(chk, {x, y, z}, std::move(r));
			}
		}
	return chk;
}

} // namespace detail

/**
 * Commutativity on window pairs, associativity, compatibility and the Leibniz
 * rule on all ordered window triples. Each witness is the first failing tuple
 * in enumeration order.
 */
template <BasisProduct P>
TpsReport check_tps(const P &p, const AlgebraDef &alg, const Window &window)
{
	auto basis = enumerate_basis(alg, window);
	TpsReport rep;
	for (std::size_t a = 0; a < basis.size(); ++a)
		for (std::size_t b = a + 1; b < basis.size(); ++b)
		{
			Element r = p.mul_basis(basis[a], basis[b]);
			r -= p.mul_basis(basis[b], basis[a]);
			detail::record(rep.commutative, {basis[a], basis[b]}, std::move(r));
		}
	for (auto &x : basis)
		for (auto &y : basis)
		{
			Element xy = p.mul_basis(x, y);
			Element bxy = alg.bracket_basis(x, y);
			for (auto &z : basis)
			{
				// (x.y).z - x.(y.z)
				Element r;
				for (auto &[b, c] : xy)
					r.add_scaled(p.mul_basis(b, z), c);
				Element yz = p.mul_basis(y, z);
				for (auto &[b, c] : yz)
					r.add_scaled(p.mul_basis(x, b), -c);
				detail::record(rep.associative, {x, y, z}, std::move(r));

				// 2z.[x,y] - [z.x, y] - [x, z.y]
				Element s;
				for (auto &[b, c] : bxy)
					s.add_scaled(p.mul_basis(z, b), Scalar(2) * c);
				Element zx = p.mul_basis(z, x);
				for (auto &[b, c] : zx)
					alg.bracket_into(b, y, -c, s);
				Element zy = p.mul_basis(z, y);
				for (auto &[b, c] : zy)
					alg.bracket_into(x, b, -c, s);
				detail::record(rep.compatible, {x, y, z}, std::move(s));
			}
		}
	rep.leibniz = detail::scan_leibniz(p, alg, basis);
	return rep;
}

/// Leibniz rule [x.y, z] = x.[y,z] + [x,z].y on all ordered window triples.
template <BasisProduct P>
IdentityCheck check_poisson(const P &p, const AlgebraDef &alg, const Window &window)
{
	return detail::scan_leibniz(p, alg, enumerate_basis(alg, window));
}

/// x -> z.x
template <BasisProduct P>
LinearMap left_mult_map(const P &p, const Element &z)
{
	return LinearMap([p, z](const BasisIndex &x) {
		Element out;
		for (auto &[b, c] : z)
			out.add_scaled(p.mul_basis(b, x), c);
		return out;
	});
}

// ---------------------------------------------------------------------------
// Family bases and the window solver

/// A 1/2-derivation generator with a label for reports.
struct FamilyGenerator
{
	std::string label;
	ShiftMap map;
};

/**
 * The closed-form 1/2-derivation generators of `alg` whose shifts lie in
 * `shifts` (group coordinates up to shifts.alpha_coeff_bound, index shifts in
 * [shifts.i_min, shifts.i_max]):
 *   witt, w_ab (b = -1): alpha_t, beta_t
 *   w_abs (b = -1): alpha_t, beta_t, gamma_t
 *   wn_g: E_(d,m)
 *   hwn_g: one chain per shift d and residue class, truncated to the index range
 * Other parameter values only admit the identity.
 */
inline std::vector<FamilyGenerator> standard_family_basis(const AlgebraDef &alg, const Window &shifts)
{
	std::vector<FamilyGenerator> out;
	const std::string &name = alg.name();
	auto b_is_minus1 = [&] { return alg.parameter("b") == std::optional<Scalar>(Scalar(-1)); };
	auto tag = [](const std::string &s, long t) { return s + "(" + std::to_string(t) + ")"; };

	if (name == "witt" || ((name == "w_ab" || name == "w_abs") && !b_is_minus1()))
	{
		if (name == "witt")
			for (long t = shifts.i_min; t <= shifts.i_max; ++t)
				out.push_back({tag("alpha", t), ShiftMap({ShiftTerm{0, 0, Scalar(), t, Scalar(1)}})});
		else
			out.push_back({"identity", ShiftMap::identity(alg)});
		return out;
	}
	if (name == "w_ab")
	{
		for (long t = shifts.i_min; t <= shifts.i_max; ++t)
			out.push_back({tag("alpha", t), family_w_ab(*alg.parameter("a"), Scalar(-1), {{t, Scalar(1)}}, {})});
		for (long t = shifts.i_min; t <= shifts.i_max; ++t)
			out.push_back({tag("beta", t), family_w_ab(*alg.parameter("a"), Scalar(-1), {}, {{t, Scalar(1)}})});
		return out;
	}
	if (name == "w_abs")
	{
		const Scalar a = *alg.parameter("a");
		for (long t = shifts.i_min; t <= shifts.i_max; ++t)
			out.push_back({tag("alpha", t), family_w_a_minus1_half(a, {{t, Scalar(1)}}, {}, {})});
		for (long t = shifts.i_min; t <= shifts.i_max; ++t)
			out.push_back({tag("beta", t), family_w_a_minus1_half(a, {}, {{t, Scalar(1)}}, {})});
		for (long t = shifts.i_min; t <= shifts.i_max; ++t)
			out.push_back({tag("gamma", t), family_w_a_minus1_half(a, {}, {}, {{t, Scalar(1)}})});
		return out;
	}
	if (name == "wn_g")
	{
		for (const Scalar &d : window_alphas(alg, shifts))
			for (long m = shifts.i_min; m <= shifts.i_max; ++m)
				out.push_back({"E(" + d.to_string() + "," + std::to_string(m) + ")",
				               family_wn(alg, {{{d, m}, Scalar(1)}})});
		return out;
	}
	if (name == "hwn_g")
	{
		long n = alg.parameter("n")->to_long();
		std::pair<long, long> kw{shifts.i_min, shifts.i_max};
		for (const Scalar &d : window_alphas(alg, shifts))
		{
			std::string label = "chain(" + d.to_string();
			if (n == 0)
			{
				if (!d.is_integer())
					continue;
				ShiftMap m = family_hwn(alg, {{d, 0, Scalar(1)}}, kw);
				if (!m.is_zero())
					out.push_back({label + ")", std::move(m)});
				continue;
			}
			if (d.is_zero())
			{
				out.push_back({label + ",0)", family_hwn(alg, {{d, 0, Scalar(1)}}, kw)});
				continue;
			}
			long an = n < 0 ? -n : n;
			for (long q = 0; q < an; ++q)
			{
				// seed inside the class where backward propagation never hits k = n
				long seed = n > 0 ? q : -q;
				ShiftMap m = family_hwn(alg, {{d, seed, Scalar(1)}}, kw);
				if (!m.is_zero())
					out.push_back({label + "," + std::to_string(seed) + ")", std::move(m)});
			}
		}
		return out;
	}
	throw Error("no standard 1/2-derivation family for algebra '" + name + "'");
}

/// Product defined by per-generator 1/2-derivations: x.y = phi_x(y) when x is in the window, else phi_y(x).
class WindowProduct
{
public:
	WindowProduct(std::shared_ptr<const WindowIndex> window, std::vector<ShiftMap> phis)
	    : window_(std::move(window)), phis_(std::make_shared<const std::vector<ShiftMap>>(std::move(phis)))
	{
	}

	const std::vector<ShiftMap> &phis() const { return *phis_; }

	Element mul_basis(const BasisIndex &x, const BasisIndex &y) const
	{
		if (long p = window_->position(x); p >= 0)
			return (*phis_)[p](y);
		if (long p = window_->position(y); p >= 0)
			return (*phis_)[p](x);
		throw Error("window product needs one factor inside the window");
	}
	Element mul(const Element &x, const Element &y) const { return witt::mul(*this, x, y); }

private:
	std::shared_ptr<const WindowIndex> window_;
	std::shared_ptr<const std::vector<ShiftMap>> phis_;
};

struct TpsSolution
{
	bool trivial = false;
	/// coefficients[X][k] multiplies generator k shifted to X's degree.
	std::vector<std::vector<Scalar>> coefficients;
	WindowProduct product;
	/// phi_{X0}(X0) for X0 = (first family, 0, 0) when X0 is in the window.
	Element w;
	TpsReport report;
};

struct TpsSolveResult
{
	std::vector<FamilyGenerator> generators;
	std::vector<BasisIndex> window_basis;
	std::size_t unknowns = 0;
	std::size_t constraints = 0;
	std::size_t solution_dimension = 0; ///< dimension of the symmetric-constraint nullspace
	std::size_t rejected = 0;           ///< nullspace basis vectors failing the re-check
	std::vector<TpsSolution> solutions; ///< zero product first, then passing candidates
};

/**
 * Window-scale transposed Poisson solver.
 *
 * For each window basis element X, phi_X = sum_k c_{X,k} G_k translated by X's
 * (alpha, i). The symmetry constraints phi_X(Y) = phi_Y(X) for all window pairs
 * are solved exactly; every nullspace basis vector becomes a candidate product
 * that is re-checked with check_tps. Every generator must pass the
 * 1/2-derivation check on the window.
 */
inline TpsSolveResult solve_tps(const AlgebraDef &alg, const std::vector<FamilyGenerator> &family_basis,
                                const Window &window)
{
	TpsSolveResult res;
	res.generators = family_basis;
	auto widx = std::make_shared<const WindowIndex>(alg, window);
	const auto &B = widx->basis();
	res.window_basis = B;
	const std::size_t K = family_basis.size(), N = B.size();

	auto pairs = window_pairs(alg, window);
	for (auto &g : family_basis)
		if (!check_half_derivation(alg, g.map, pairs).ok())
			throw Error("family generator " + g.label + " is not a 1/2-derivation on the window");

	res.unknowns = N * K;
	auto translate = [](const Element &e, const BasisIndex &by) {
		Element out;
		for (auto &[b, c] : e)
			out.add({b.family, b.alpha + by.alpha, b.i + by.i}, c);
		return out;
	};

	Echelon ech(res.unknowns);
	for (std::size_t x = 0; x < N; ++x)
		for (std::size_t y = x + 1; y < N; ++y)
		{
			std::map<BasisIndex, std::map<std::size_t, Scalar>> rows;
			for (std::size_t k = 0; k < K; ++k)
			{
				for (auto &[b, c] : translate(family_basis[k].map(B[y]), B[x]))
					rows[b][x * K + k] += c;
				for (auto &[b, c] : translate(family_basis[k].map(B[x]), B[y]))
					rows[b][y * K + k] -= c;
			}
			for (auto &[o, row] : rows)
			{
				SparseVec r = to_sparse(row);
				if (r.empty())
					continue;
				++res.constraints;
				ech.insert(r);
			}
		}

	auto make_solution = [&](const SparseVec &v, bool trivial) {
		std::vector<std::vector<Scalar>> coeffs(N, std::vector<Scalar>(K));
		for (auto &[u, c] : v)
			coeffs[u / K][u % K] = c;
		std::vector<ShiftMap> phis(N);
		for (std::size_t x = 0; x < N; ++x)
			for (std::size_t k = 0; k < K; ++k)
				if (!coeffs[x][k].is_zero())
					phis[x] += coeffs[x][k] * family_basis[k].map.shifted(B[x].alpha, B[x].i);
		WindowProduct prod(widx, std::move(phis));
		Element w;
		BasisIndex x0{0, Scalar(), 0};
		if (widx->contains(x0))
			w = prod.mul_basis(x0, x0);
		TpsReport rep = check_tps(prod, alg, window);
		return TpsSolution{trivial, std::move(coeffs), std::move(prod), std::move(w), std::move(rep)};
	};

	res.solutions.push_back(make_solution({}, true));
	auto null = ech.nullspace();
	res.solution_dimension = null.size();
	for (auto &v : null)
	{
		TpsSolution s = make_solution(v, false);
		if (s.report.ok())
			res.solutions.push_back(std::move(s));
		else
			++res.rejected;
	}
	return res;
}

} // namespace witt
