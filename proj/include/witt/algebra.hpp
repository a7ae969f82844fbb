#pragma once

// Basis indices, sparse elements, rule-based structure constants and the
// graded Lie algebras built from them.

#include "witt/exactnum.hpp"
#include "witt/poly.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace witt {

/// A basis symbol: family id (declaration order), group part alpha and integer index i.
/// For families with offset 1/2 the stored i is the integer part (Y(i) means Y_{i+1/2}).
struct BasisIndex
{
	int family = 0;
	Scalar alpha;
	long i = 0;

	friend bool operator==(const BasisIndex &, const BasisIndex &) = default;
	friend std::strong_ordering operator<=>(const BasisIndex &a, const BasisIndex &b)
	{
		if (auto c = a.family <=> b.family; c != 0)
			return c;
		if (auto c = a.alpha <=> b.alpha; c != 0)
			return c;
		return a.i <=> b.i;
	}
};

/// Finitely supported linear combination of basis elements, kept canonical:
/// no zero coefficients, terms ordered by BasisIndex.
class Element
{
public:
	using Terms = std::map<BasisIndex, Scalar>;

	Element() = default;
	Element(BasisIndex b, Scalar c = Scalar(1)) { add(std::move(b), c); }

	const Terms &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	std::size_t size() const { return terms_.size(); }
	auto begin() const { return terms_.begin(); }
	auto end() const { return terms_.end(); }

	Scalar coeff(const BasisIndex &b) const
	{
		auto it = terms_.find(b);
		return it == terms_.end() ? Scalar() : it->second;
	}

	void add(const BasisIndex &b, const Scalar &c)
	{
		if (c.is_zero())
			return;
		auto [it, inserted] = terms_.try_emplace(b, c);
		if (!inserted)
		{
			it->second += c;
			if (it->second.is_zero())
				terms_.erase(it);
		}
	}

	/// this += c * other
	void add_scaled(const Element &other, const Scalar &c)
	{
		if (c.is_zero())
			return;
		for (auto &[b, v] : other.terms_)
			add(b, c.is_one() ? v : v * c);
	}

	Element &operator+=(const Element &o)
	{
		add_scaled(o, Scalar(1));
		return *this;
	}
	Element &operator-=(const Element &o)
	{
		add_scaled(o, Scalar(-1));
		return *this;
	}
	Element &operator*=(const Scalar &c)
	{
		if (c.is_zero())
			terms_.clear();
		else
			for (auto &[b, v] : terms_)
				v *= c;
		return *this;
	}
	friend Element operator+(Element a, const Element &b) { return a += b; }
	friend Element operator-(Element a, const Element &b) { return a -= b; }
	friend Element operator*(const Scalar &c, Element a) { return a *= c; }
	friend Element operator*(Element a, const Scalar &c) { return a *= c; }
	Element operator-() const { return Scalar(-1) * *this; }
	friend bool operator==(const Element &, const Element &) = default;

	/// Keeps only terms satisfying `pred`.
	template <class Pred>
	Element filtered(Pred pred) const
	{
		Element r;
		for (auto &[b, v] : terms_)
			if (pred(b))
				r.terms_.emplace(b, v);
		return r;
	}

private:
	Terms terms_;
};

struct FamilyDecl
{
	std::string name;
	Rational index_offset{0};
	Scalar grade_alpha; ///< u in grade = u*alpha + v*(i + offset)
	Scalar grade_index; ///< v
};

/// Affine index shift: constant + sum of integer multiples of named parameters.
struct IndexShift
{
	long constant = 0;
	std::map<std::string, long> params;

	friend bool operator==(const IndexShift &, const IndexShift &) = default;
};

/// One output term of a rule: coeff(alpha, beta, i, j, params) * H(alpha+beta+alpha_offset, i+j+shift).
/// Polynomial variables: 0 = left alpha, 1 = right alpha, 2 = left i, 3 = right i, 4+k = parameter k.
struct RuleTerm
{
	int target = 0;
	Scalar alpha_offset;
	IndexShift index_shift;
	Poly coeff;
};

/// Structure constants for the ordered family pair (left, right).
struct Rule
{
	int left = 0;
	int right = 0;
	std::vector<RuleTerm> terms;
};

enum class Symmetry
{
	antisymmetric,
	symmetric
};

namespace poly_var {
inline constexpr int alpha_left = 0;
inline constexpr int alpha_right = 1;
inline constexpr int i_left = 2;
inline constexpr int i_right = 3;
inline constexpr int first_param = 4;
} // namespace poly_var

using Parameters = std::vector<std::pair<std::string, Scalar>>;

class DefinitionError : public Error
{
public:
	using Error::Error;
};

/// Where a bracket/product term of (F, G) can land: target family and index offsets.
struct TermOffset
{
	int target;
	Scalar alpha_offset;
	long index_shift;
};

/**
 * RuleSystem: compiled structure constants for a set of families.
 *
 * Rules are declared for one ordering of each family pair; the other ordering
 * is derived (negated for antisymmetric systems). Rules on a family with itself
 * are applied as written, so an ill-formed same-family rule is caught by the
 * identity checks rather than hidden.
 */
class RuleSystem
{
public:
	RuleSystem() = default;

	RuleSystem(const std::vector<FamilyDecl> &families, const Parameters &params, std::vector<Rule> rules,
	           Symmetry symmetry, bool has_group)
	    : families_(families), params_(params), rules_(std::move(rules)), symmetry_(symmetry), has_group_(has_group)
	{
		const int nf = static_cast<int>(families_.size());
		table_.assign(nf * nf, Slot{});
		offsets_.assign(nf * nf, {});
		std::map<int, Scalar> param_values;
		for (std::size_t k = 0; k < params_.size(); ++k)
			param_values[poly_var::first_param + static_cast<int>(k)] = params_[k].second;

		for (std::size_t r = 0; r < rules_.size(); ++r)
		{
			const Rule &rule = rules_[r];
			if (rule.left < 0 || rule.left >= nf || rule.right < 0 || rule.right >= nf)
				throw DefinitionError("rule references an undeclared family");
			Slot &direct = table_[rule.left * nf + rule.right];
			if (direct.rule >= 0)
				throw DefinitionError("duplicate rule for [" + families_[rule.left].name + ", " +
				                      families_[rule.right].name + "]");
			Compiled compiled;
			for (const RuleTerm &t : rule.terms)
			{
				if (t.target < 0 || t.target >= nf)
					throw DefinitionError("rule term references an undeclared family");
				CompiledTerm ct;
				ct.target = t.target;
				ct.alpha_offset = t.alpha_offset;
				ct.index_shift = resolve_shift(t.index_shift);
				Poly p = t.coeff.substitute(param_values);
				for (auto &[m, c] : p.terms())
				{
					for (std::size_t k = poly_var::first_param; k < m.size(); ++k)
						if (m[k] != 0)
							throw DefinitionError("coefficient uses an unknown variable");
					std::array<int, 4> e{};
					for (std::size_t k = 0; k < m.size() && k < 4; ++k)
						e[k] = m[k];
					ct.monomials.emplace_back(c, e);
				}
				check_homogeneous(rule, ct, !p.is_zero());
				compiled.terms.push_back(std::move(ct));
			}
			compiled_.push_back(std::move(compiled));
			direct = Slot{static_cast<int>(r), false};
			if (rule.left != rule.right)
			{
				Slot &rev = table_[rule.right * nf + rule.left];
				if (rev.rule >= 0 && !rev.reversed)
					throw DefinitionError("rules declared for both orderings of [" + families_[rule.left].name +
					                      ", " + families_[rule.right].name + "]");
				rev = Slot{static_cast<int>(r), true};
			}
		}
		for (int f = 0; f < nf; ++f)
			for (int g = 0; g < nf; ++g)
			{
				const Slot &s = table_[f * nf + g];
				if (s.rule < 0)
					continue;
				for (const CompiledTerm &t : compiled_[s.rule].terms)
					if (!t.monomials.empty())
						offsets_[f * nf + g].push_back({t.target, t.alpha_offset, t.index_shift});
			}
	}

	const std::vector<FamilyDecl> &families() const { return families_; }
	const Parameters &parameters() const { return params_; }
	const std::vector<Rule> &rules() const { return rules_; }
	Symmetry symmetry() const { return symmetry_; }

	/// out += scale * op(x, y) for basis elements x, y.
	void apply(const BasisIndex &x, const BasisIndex &y, const Scalar &scale, Element &out) const
	{
		const int nf = static_cast<int>(families_.size());
		const Slot &s = table_[x.family * nf + y.family];
		if (s.rule < 0)
			return;
		const BasisIndex &l = s.reversed ? y : x;
		const BasisIndex &r = s.reversed ? x : y;
		const Scalar vals[4] = {l.alpha, r.alpha, Scalar(l.i), Scalar(r.i)};
		const bool negate = s.reversed && symmetry_ == Symmetry::antisymmetric;
		for (const CompiledTerm &t : compiled_[s.rule].terms)
		{
			Scalar c;
			for (auto &[coef, e] : t.monomials)
			{
				Scalar term = coef;
				for (int k = 0; k < 4 && !term.is_zero(); ++k)
					for (int p = 0; p < e[k]; ++p)
						term *= vals[k];
				c += term;
			}
			if (c.is_zero())
				continue;
			if (negate)
				c = -c;
			if (!scale.is_one())
				c *= scale;
			BasisIndex target{t.target, t.alpha_offset.is_zero() ? l.alpha + r.alpha : l.alpha + r.alpha + t.alpha_offset,
			                  l.i + r.i + t.index_shift};
			out.add(target, c);
		}
	}

	Element apply(const BasisIndex &x, const BasisIndex &y) const
	{
		Element out;
		apply(x, y, Scalar(1), out);
		return out;
	}

	Element apply(const Element &x, const Element &y) const
	{
		Element out;
		for (auto &[bx, cx] : x)
			for (auto &[by, cy] : y)
				apply(bx, by, cx * cy, out);
		return out;
	}

	/// Possible landing offsets of op(F-element, G-element).
	std::span<const TermOffset> offsets(int f, int g) const
	{
		return offsets_[f * static_cast<int>(families_.size()) + g];
	}

	/// True when every same-family rule is (anti)symmetric under swapping its arguments,
	/// i.e. op(y, x) = -op(x, y) (resp. +) holds identically.
	bool structurally_consistent() const
	{
		const std::array<int, 4> swap{poly_var::alpha_right, poly_var::alpha_left, poly_var::i_right, poly_var::i_left};
		for (std::size_t r = 0; r < rules_.size(); ++r)
		{
			if (rules_[r].left != rules_[r].right)
				continue;
			std::map<std::tuple<int, Scalar, long>, Poly> grouped;
			for (const CompiledTerm &t : compiled_[r].terms)
			{
				Poly p;
				for (auto &[c, e] : t.monomials)
				{
					Poly m(c);
					for (int k = 0; k < 4; ++k)
						for (int q = 0; q < e[k]; ++q)
							m = m * Poly::var(k);
					p += m;
				}
				grouped[{t.target, t.alpha_offset, t.index_shift}] += p;
			}
			for (auto &[key, p] : grouped)
			{
				Poly swapped = p.remap(swap);
				Poly test = symmetry_ == Symmetry::antisymmetric ? p + swapped : p - swapped;
				if (!test.is_zero())
					return false;
			}
		}
		return true;
	}

	long resolve_shift(const IndexShift &s) const
	{
		long v = s.constant;
		for (auto &[name, mult] : s.params)
		{
			auto it = std::find_if(params_.begin(), params_.end(), [&](auto &p) { return p.first == name; });
			if (it == params_.end())
				throw DefinitionError("index shift uses undeclared parameter '" + name + "'");
			if (!it->second.is_integer())
				throw DefinitionError("parameter '" + name + "' is used as an index shift but is not an integer");
			v += mult * it->second.to_long();
		}
		return v;
	}

private:
	struct Slot
	{
		int rule = -1;
		bool reversed = false;
	};
	struct CompiledTerm
	{
		int target = 0;
		Scalar alpha_offset;
		long index_shift = 0;
		std::vector<std::pair<Scalar, std::array<int, 4>>> monomials;
	};
	struct Compiled
	{
		std::vector<CompiledTerm> terms;
	};

	// grade(target) must equal grade(left) + grade(right) identically in alpha, beta, i, j.
	void check_homogeneous(const Rule &rule, const CompiledTerm &t, bool nonzero) const
	{
		if (!nonzero)
			return;
		const FamilyDecl &f = families_[rule.left];
		const FamilyDecl &g = families_[rule.right];
		const FamilyDecl &h = families_[t.target];
		auto fail = [&](const std::string &why) {
			throw DefinitionError("rule [" + f.name + ", " + g.name + "] -> " + h.name + " is not grading-homogeneous (" +
			                      why + ")");
		};
		if (has_group_ && (h.grade_alpha != f.grade_alpha || h.grade_alpha != g.grade_alpha))
			fail("alpha coefficients differ");
		if (h.grade_index != f.grade_index || h.grade_index != g.grade_index)
			fail("index coefficients differ");
		Scalar lhs = h.grade_index * (Scalar(t.index_shift) + Scalar(h.index_offset));
		if (has_group_)
			lhs += h.grade_alpha * t.alpha_offset;
		Scalar rhs = f.grade_index * Scalar(f.index_offset) + g.grade_index * Scalar(g.index_offset);
		if (lhs != rhs)
			fail("constant offsets differ");
	}

	std::vector<FamilyDecl> families_;
	Parameters params_;
	std::vector<Rule> rules_;
	Symmetry symmetry_ = Symmetry::antisymmetric;
	bool has_group_ = false;
	std::vector<Slot> table_;
	std::vector<Compiled> compiled_;
	std::vector<std::vector<TermOffset>> offsets_;
};

/**
 * GroupLattice: the subgroup of Q(i) generated by finitely many Gaussian rationals,
 * viewed as a lattice in Q^2. Membership is decided on a triangular basis
 * {(p, q), (0, r)} of the scaled integer lattice.
 */
class GroupLattice
{
public:
	GroupLattice() = default;
	explicit GroupLattice(std::span<const Scalar> generators)
	{
		scale_ = 1;
		for (const Scalar &g : generators)
		{
			scale_ = lcm(scale_, g.re().get_den());
			scale_ = lcm(scale_, g.im().get_den());
		}
		for (const Scalar &g : generators)
		{
			auto [x, y] = scaled(g);
			insert(x, y);
		}
	}

	bool contains(const Scalar &a) const
	{
		Rational sx = a.re() * scale_, sy = a.im() * scale_;
		if (sx.get_den() != 1 || sy.get_den() != 1)
			return false;
		Integer x = sx.get_num(), y = sy.get_num();
		if (px_ == 0)
		{
			if (x != 0)
				return false;
		}
		else
		{
			if (x % px_ != 0)
				return false;
			Integer c = x / px_;
			y -= c * py_;
		}
		return r_ == 0 ? y == 0 : y % r_ == 0;
	}

private:
	std::pair<Integer, Integer> scaled(const Scalar &g) const
	{
		Rational x = g.re() * scale_, y = g.im() * scale_;
		return {x.get_num(), y.get_num()};
	}

	void insert(Integer x, Integer y)
	{
		if (x == 0)
		{
			r_ = gcd(r_, y);
			return;
		}
		if (px_ == 0)
		{
			px_ = x;
			py_ = y;
			normalize();
			return;
		}
		Integer g, s, t;
		mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), px_.get_mpz_t(), x.get_mpz_t());
		Integer nx = g, ny = s * py_ + t * y;
		// (x/g)*old - (px/g)*new has zero first coordinate
		Integer rem = (x / g) * py_ - (px_ / g) * y;
		px_ = nx;
		py_ = ny;
		r_ = gcd(r_, rem);
		normalize();
	}

	void normalize()
	{
		if (px_ < 0)
		{
			px_ = -px_;
			py_ = -py_;
		}
		r_ = abs(r_);
		if (r_ != 0)
		{
			py_ %= r_;
			if (py_ < 0)
				py_ += r_;
		}
	}

	Integer scale_{1};
	Integer px_{0}, py_{0}, r_{0};
};

/// Finite truncation of the basis: group coordinates bounded by alpha_coeff_bound, i in [i_min, i_max].
struct Window
{
	long alpha_coeff_bound = 0;
	long i_min = 0;
	long i_max = 0;

	friend bool operator==(const Window &, const Window &) = default;

	void validate() const
	{
		if (alpha_coeff_bound < 0)
			throw Error("window generator bound must be nonnegative");
		if (i_min > i_max)
			throw Error("window is empty (i_min > i_max)");
	}

	Window shrunk(long di, long dalpha = 0) const
	{
		return {std::max(0L, alpha_coeff_bound - dalpha), i_min + di, i_max - di};
	}
	Window padded(long di, long dalpha = 0) const { return {alpha_coeff_bound + dalpha, i_min - di, i_max + di}; }
};

/**
 * AlgebraDef: a graded Lie algebra given by structure-constant rules.
 *
 * Construction validates the whole definition (declared names, grading
 * homogeneity of every rule term, integral index shifts). Instances are
 * immutable afterwards.
 */
class AlgebraDef
{
public:
	AlgebraDef() = default;

	AlgebraDef(std::string name, Parameters params, std::vector<Scalar> generators, std::vector<FamilyDecl> families,
	           std::vector<Rule> rules)
	    : name_(std::move(name)), generators_(std::move(generators)), lattice_(generators_)
	{
		std::set<std::string> seen;
		for (auto &f : families)
			if (!seen.insert(f.name).second)
				throw DefinitionError("family '" + f.name + "' declared twice");
		seen.clear();
		for (auto &p : params)
			if (!seen.insert(p.first).second)
				throw DefinitionError("parameter '" + p.first + "' declared twice");
		for (const Scalar &g : generators_)
			if (g.is_zero())
				throw DefinitionError("group generators must be nonzero");
		rules_ = RuleSystem(families, params, std::move(rules), Symmetry::antisymmetric, has_group());
	}

	const std::string &name() const { return name_; }
	const Parameters &parameters() const { return rules_.parameters(); }
	const std::vector<Scalar> &generators() const { return generators_; }
	const std::vector<FamilyDecl> &families() const { return rules_.families(); }
	const std::vector<Rule> &rules() const { return rules_.rules(); }
	const RuleSystem &rule_system() const { return rules_; }
	bool has_group() const { return !generators_.empty(); }

	std::optional<Scalar> parameter(std::string_view key) const
	{
		for (auto &[k, v] : parameters())
			if (k == key)
				return v;
		return std::nullopt;
	}

	int family_id(std::string_view fname) const
	{
		for (std::size_t k = 0; k < families().size(); ++k)
			if (families()[k].name == fname)
				return static_cast<int>(k);
		return -1;
	}

	bool in_group(const Scalar &alpha) const { return has_group() ? lattice_.contains(alpha) : alpha.is_zero(); }

	/// Throws unless b names a declared family and a group element of this algebra.
	void validate(const BasisIndex &b) const
	{
		if (b.family < 0 || b.family >= static_cast<int>(families().size()))
			throw Error("unknown family id " + std::to_string(b.family));
		if (!in_group(b.alpha))
			throw Error("index " + format(b) + " lies outside the algebra's group");
	}
	void validate(const Element &x) const
	{
		for (auto &[b, c] : x)
			validate(b);
	}

	/// grade(b) = u*alpha + v*(i + offset).
	Scalar grade(const BasisIndex &b) const
	{
		if (b.family < 0 || b.family >= static_cast<int>(families().size()))
			throw Error("unknown family id " + std::to_string(b.family));
		const FamilyDecl &f = families()[b.family];
		Scalar g = f.grade_index * (Scalar(b.i) + Scalar(f.index_offset));
		if (has_group())
			g += f.grade_alpha * b.alpha;
		return g;
	}

	/// Bracket on basis elements, unchecked.
	void bracket_into(const BasisIndex &x, const BasisIndex &y, const Scalar &scale, Element &out) const
	{
		rules_.apply(x, y, scale, out);
	}
	Element bracket_basis(const BasisIndex &x, const BasisIndex &y) const { return rules_.apply(x, y); }
	Element bracket_unchecked(const Element &x, const Element &y) const { return rules_.apply(x, y); }

	/// "L(3)", "Y(-1)", "L(1/2,3)".
	std::string format(const BasisIndex &b) const
	{
		std::string fam = b.family >= 0 && b.family < static_cast<int>(families().size()) ? families()[b.family].name
		                                                                                 : "?" + std::to_string(b.family);
		if (has_group())
			return fam + "(" + b.alpha.to_string() + "," + std::to_string(b.i) + ")";
		return fam + "(" + std::to_string(b.i) + ")";
	}

	std::string format(const Element &x) const
	{
		if (x.is_zero())
			return "0";
		std::string out;
		for (auto &[b, c] : x)
		{
			if (!out.empty())
				out += " + ";
			if (!c.is_one())
				out += (c.is_integer() ? c.to_string() : "(" + c.to_string() + ")") + "*";
			out += format(b);
		}
		return out;
	}

private:
	std::string name_;
	std::vector<Scalar> generators_;
	GroupLattice lattice_;
	RuleSystem rules_;
};

/// Bilinear, antisymmetric bracket; validates all indices.
inline Element bracket(const AlgebraDef &alg, const Element &x, const Element &y)
{
	alg.validate(x);
	alg.validate(y);
	return alg.bracket_unchecked(x, y);
}

inline Scalar grade(const AlgebraDef &alg, const BasisIndex &b) { return alg.grade(b); }

/// Group parts inside a window, ordered lexicographically by generator coordinates (duplicates dropped).
inline std::vector<Scalar> window_alphas(const AlgebraDef &alg, const Window &w)
{
	if (!alg.has_group())
		return {Scalar()};
	const auto &gens = alg.generators();
	std::vector<long> coords(gens.size(), -w.alpha_coeff_bound);
	std::vector<Scalar> out;
	std::set<Scalar> seen;
	while (true)
	{
		Scalar a;
		for (std::size_t k = 0; k < gens.size(); ++k)
			a += Scalar(coords[k]) * gens[k];
		if (seen.insert(a).second)
			out.push_back(a);
		std::size_t k = gens.size();
		while (k > 0)
		{
			--k;
			if (coords[k] < w.alpha_coeff_bound)
			{
				++coords[k];
				std::fill(coords.begin() + static_cast<long>(k) + 1, coords.end(), -w.alpha_coeff_bound);
				break;
			}
			if (k == 0)
				return out;
		}
	}
}

/// All basis indices of the window: family declaration order, then generator coordinates, then i.
inline std::vector<BasisIndex> enumerate_basis(const AlgebraDef &alg, const Window &w)
{
	w.validate();
	std::vector<BasisIndex> out;
	auto alphas = window_alphas(alg, w);
	for (int f = 0; f < static_cast<int>(alg.families().size()); ++f)
		for (const Scalar &a : alphas)
			for (long i = w.i_min; i <= w.i_max; ++i)
				out.push_back({f, a, i});
	return out;
}

/// Fast membership and position lookup for the basis of a window.
class WindowIndex
{
public:
	WindowIndex() = default;
	WindowIndex(const AlgebraDef &alg, const Window &w) : window_(w), basis_(enumerate_basis(alg, w))
	{
		auto alphas = window_alphas(alg, w);
		for (std::size_t k = 0; k < alphas.size(); ++k)
			alpha_pos_.emplace(alphas[k], static_cast<long>(k));
		per_family_ = static_cast<long>(alphas.size()) * (w.i_max - w.i_min + 1);
		families_ = static_cast<int>(alg.families().size());
	}

	const Window &window() const { return window_; }
	const std::vector<BasisIndex> &basis() const { return basis_; }
	std::size_t size() const { return basis_.size(); }

	/// Position in enumeration order, or -1 if outside.
	long position(const BasisIndex &b) const
	{
		if (b.family < 0 || b.family >= families_ || b.i < window_.i_min || b.i > window_.i_max)
			return -1;
		auto it = alpha_pos_.find(b.alpha);
		if (it == alpha_pos_.end())
			return -1;
		return b.family * per_family_ + it->second * (window_.i_max - window_.i_min + 1) + (b.i - window_.i_min);
	}
	bool contains(const BasisIndex &b) const { return position(b) >= 0; }
	bool contains(const Element &x) const
	{
		return std::all_of(x.begin(), x.end(), [&](auto &t) { return contains(t.first); });
	}

private:
	Window window_;
	std::vector<BasisIndex> basis_;
	std::map<Scalar, long> alpha_pos_;
	long per_family_ = 0;
	int families_ = 0;
};

struct JacobiViolation
{
	std::array<BasisIndex, 3> triple;
	Element residual;
};

struct ViolationReport
{
	std::vector<JacobiViolation> violations;
	std::size_t triples_checked = 0;
	bool ok() const { return violations.empty(); }
};

/// Jacobi residual [x,[y,z]] + [y,[z,x]] + [z,[x,y]].
inline Element jacobi_residual(const AlgebraDef &alg, const BasisIndex &x, const BasisIndex &y, const BasisIndex &z)
{
	Element out;
	auto nest = [&](const BasisIndex &a, const BasisIndex &b, const BasisIndex &c) {
		Element inner = alg.bracket_basis(b, c);
		for (auto &[t, v] : inner)
			alg.bracket_into(a, t, v, out);
	};
	nest(x, y, z);
	nest(y, z, x);
	nest(z, x, y);
	return out;
}

/**
 * Evaluates the Jacobi identity on every basis triple of the window.
 *
 * When the rules are structurally antisymmetric the Jacobi sum is alternating,
 * so only strictly increasing triples (in enumeration order) are evaluated;
 * otherwise all ordered triples are.
 */
inline ViolationReport check_jacobi(const AlgebraDef &alg, const Window &window)
{
	auto basis = enumerate_basis(alg, window);
	ViolationReport report;
	const std::size_t n = basis.size();
	if (alg.rule_system().structurally_consistent())
	{
		for (std::size_t a = 0; a < n; ++a)
			for (std::size_t b = a + 1; b < n; ++b)
				for (std::size_t c = b + 1; c < n; ++c)
				{
					++report.triples_checked;
					Element r = jacobi_residual(alg, basis[a], basis[b], basis[c]);
					if (!r.is_zero())
						report.violations.push_back({{basis[a], basis[b], basis[c]}, std::move(r)});
				}
	}
	else
	{
		for (std::size_t a = 0; a < n; ++a)
			for (std::size_t b = 0; b < n; ++b)
				for (std::size_t c = 0; c < n; ++c)
				{
					++report.triples_checked;
					Element r = jacobi_residual(alg, basis[a], basis[b], basis[c]);
					if (!r.is_zero())
						report.violations.push_back({{basis[a], basis[b], basis[c]}, std::move(r)});
				}
	}
	return report;
}

} // namespace witt
