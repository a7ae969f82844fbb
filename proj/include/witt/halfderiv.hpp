#pragma once

// 1/2-derivations: phi([x,y]) = 1/2 ([phi(x), y] + [x, phi(y)]).
//
// Two representations of linear maps are used: ShiftMap (constant-coefficient
// shifts, the shape of all closed-form families) and WindowMap (a raw matrix on
// a finite window, the shape of solver output). classify_interior connects them.

#include "witt/algebra.hpp"
#include "witt/linalg.hpp"

#include <concepts>
#include <functional>
#include <memory>
#include <optional>
#include <tuple>

namespace witt {

/// Anything that maps basis elements to elements.
template <class M>
concept BasisMap = requires(const M &m, const BasisIndex &b) {
	{ m(b) } -> std::convertible_to<Element>;
};

/// Linear extension of a basis map.
template <BasisMap M>
Element apply(const M &map, const Element &x)
{
	Element out;
	for (auto &[b, c] : x)
		out.add_scaled(map(b), c);
	return out;
}

/// Type-erased linear map, evaluable on any basis element its closure supports.
class LinearMap
{
public:
	LinearMap() : f_([](const BasisIndex &) { return Element(); }) {}
	explicit LinearMap(std::function<Element(const BasisIndex &)> f) : f_(std::move(f)) {}
	Element operator()(const BasisIndex &b) const { return f_(b); }

private:
	std::function<Element(const BasisIndex &)> f_;
};

struct ShiftTerm
{
	int source = 0;
	int target = 0;
	Scalar alpha_shift;
	long i_shift = 0;
	Scalar coeff;

	auto key() const { return std::tie(source, target, alpha_shift, i_shift); }
};

/**
 * ShiftMap: (F, alpha, i) -> sum over terms with source F of coeff * (target, alpha + alpha_shift, i + i_shift).
 *
 * i_shift acts on stored indices, so a term L -> Y with shift t sends L_m to
 * Y_{m+t+1/2} and Y -> I with shift t+1 sends Y_{m+1/2} to I_{m+t+1}.
 * An optional truncation marks the map as a finite window [kmin, kmax] of an
 * infinite formal family; see check_half_derivation.
 */
class ShiftMap
{
public:
	ShiftMap() = default;
	explicit ShiftMap(std::vector<ShiftTerm> terms) { add_terms(terms); }

	static ShiftMap identity(const AlgebraDef &alg, const Scalar &lambda = Scalar(1))
	{
		std::vector<ShiftTerm> t;
		for (int f = 0; f < static_cast<int>(alg.families().size()); ++f)
			t.push_back({f, f, Scalar(), 0, lambda});
		return ShiftMap(std::move(t));
	}

	const std::vector<ShiftTerm> &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	const std::optional<std::pair<long, long>> &truncation() const { return truncation_; }
	void set_truncation(long kmin, long kmax) { truncation_ = {kmin, kmax}; }

	void add(const ShiftTerm &t)
	{
		if (t.coeff.is_zero())
			return;
		auto it = std::lower_bound(terms_.begin(), terms_.end(), t,
		                           [](const ShiftTerm &a, const ShiftTerm &b) { return a.key() < b.key(); });
		if (it != terms_.end() && it->key() == t.key())
		{
			it->coeff += t.coeff;
			if (it->coeff.is_zero())
				terms_.erase(it);
		}
		else
			terms_.insert(it, t);
	}
	void add_terms(const std::vector<ShiftTerm> &ts)
	{
		for (auto &t : ts)
			add(t);
	}

	Element operator()(const BasisIndex &b) const
	{
		Element out;
		for (const ShiftTerm &t : terms_)
			if (t.source == b.family)
				out.add({t.target, b.alpha + t.alpha_shift, b.i + t.i_shift}, t.coeff);
		return out;
	}

	/// The same map composed with a translation by (alpha, i) on the output side.
	ShiftMap shifted(const Scalar &alpha, long i) const
	{
		ShiftMap r;
		for (ShiftTerm t : terms_)
		{
			t.alpha_shift += alpha;
			t.i_shift += i;
			r.add(t);
		}
		if (truncation_)
			r.truncation_ = std::pair{truncation_->first + i, truncation_->second + i};
		return r;
	}

	ShiftMap &operator+=(const ShiftMap &o)
	{
		add_terms(o.terms_);
		return *this;
	}
	friend ShiftMap operator+(ShiftMap a, const ShiftMap &b) { return a += b; }
	friend ShiftMap operator*(const Scalar &c, const ShiftMap &m)
	{
		ShiftMap r;
		if (!c.is_zero())
			for (ShiftTerm t : m.terms_)
			{
				t.coeff *= c;
				r.add(t);
			}
		r.truncation_ = m.truncation_;
		return r;
	}
	friend bool operator==(const ShiftMap &a, const ShiftMap &b)
	{
		if (a.terms_.size() != b.terms_.size())
			return false;
		for (std::size_t k = 0; k < a.terms_.size(); ++k)
			if (a.terms_[k].key() != b.terms_[k].key() || a.terms_[k].coeff != b.terms_[k].coeff)
				return false;
		return true;
	}

	std::string to_string(const AlgebraDef &alg) const
	{
		if (terms_.empty())
			return "0";
		std::string out;
		for (const ShiftTerm &t : terms_)
		{
			if (!out.empty())
				out += " + ";
			out += t.coeff.to_string() + "*[" + alg.families()[t.source].name + "->" + alg.families()[t.target].name;
			if (alg.has_group())
				out += " d=" + t.alpha_shift.to_string();
			out += " k=" + std::to_string(t.i_shift) + "]";
		}
		return out;
	}

private:
	std::vector<ShiftTerm> terms_;
	std::optional<std::pair<long, long>> truncation_;
};

/// Grade shift of one term: grade(image) - grade(source).
inline Scalar grade_shift(const AlgebraDef &alg, const ShiftTerm &t)
{
	BasisIndex s{t.source, Scalar(), 0};
	BasisIndex d{t.target, t.alpha_shift, t.i_shift};
	return alg.grade(d) - alg.grade(s);
}

/// Raw matrix of a linear map from the span of `domain` to the span of `codomain`.
class WindowMap
{
public:
	using Basis = std::shared_ptr<const std::vector<BasisIndex>>;

	WindowMap() = default;
	WindowMap(Basis domain, Basis codomain, std::vector<SparseVec> rows)
	    : domain_(std::move(domain)), codomain_(std::move(codomain)), rows_(std::move(rows))
	{
		rows_.resize(domain_->size());
		for (std::size_t k = 0; k < domain_->size(); ++k)
			position_.emplace((*domain_)[k], k);
		for (auto &r : rows_)
			for (auto &[c, x] : r)
				if (c >= codomain_->size())
					throw Error("window map entry outside codomain");
	}

	const std::vector<BasisIndex> &domain() const { return *domain_; }
	const std::vector<BasisIndex> &codomain() const { return *codomain_; }
	/// rows()[k] is the image of domain()[k] in codomain coordinates.
	const std::vector<SparseVec> &rows() const { return rows_; }

	Element operator()(const BasisIndex &b) const
	{
		auto it = position_.find(b);
		if (it == position_.end())
			throw Error("basis element outside the window map's domain");
		Element out;
		for (auto &[c, x] : rows_[it->second])
			out.add((*codomain_)[c], x);
		return out;
	}

	bool in_domain(const BasisIndex &b) const { return position_.contains(b); }

private:
	Basis domain_;
	Basis codomain_;
	std::vector<SparseVec> rows_;
	std::map<BasisIndex, std::size_t> position_;
};

// ---------------------------------------------------------------------------
// Identity check

using BasisPair = std::pair<BasisIndex, BasisIndex>;

struct HalfDerivationFailure
{
	BasisIndex x;
	BasisIndex y;
	Element residual;
};

struct HalfDerivationReport
{
	std::vector<HalfDerivationFailure> failures;
	std::size_t pairs_checked = 0;
	bool ok() const { return failures.empty(); }
};

/// phi([x,y]) - 1/2([phi(x), y] + [x, phi(y)]), exact.
template <BasisMap M>
Element half_derivation_residual(const AlgebraDef &alg, const M &phi, const BasisIndex &x, const BasisIndex &y)
{
	static const Scalar minus_half = Scalar::fraction(-1, 2);
	Element out = apply(phi, alg.bracket_basis(x, y));
	Element px = phi(x);
	for (auto &[b, c] : px)
		alg.bracket_into(b, y, c * minus_half, out);
	Element py = phi(y);
	for (auto &[b, c] : py)
		alg.bracket_into(x, b, c * minus_half, out);
	return out;
}

namespace detail {

/**
 * For a truncated formal ShiftMap: an output o of the residual of (x, y) is
 * interior when every coefficient that could contribute to it in the untruncated
 * family is present, i.e. every needed index shift lies inside the truncation.
 */
class FormalInterior
{
public:
	FormalInterior(const AlgebraDef &alg, const ShiftMap &map) : alg_(alg), kmin_(map.truncation()->first), kmax_(map.truncation()->second)
	{
		for (const ShiftTerm &t : map.terms())
			keys_.insert({t.source, t.target, t.alpha_shift});
	}

	bool interior(const BasisIndex &x, const BasisIndex &y, const BasisIndex &o) const
	{
		const auto &rs = alg_.rule_system();
		const int nf = static_cast<int>(alg_.families().size());
		// phi([x,y]) reaches o from b' = term of [x,y]
		for (const TermOffset &off : rs.offsets(x.family, y.family))
		{
			BasisIndex b{off.target, x.alpha + y.alpha + off.alpha_offset, x.i + y.i + off.index_shift};
			if (!covered(b, o))
				return false;
		}
		for (int f = 0; f < nf; ++f)
		{
			// [phi(x), y] reaches o from c in family f
			for (const TermOffset &off : rs.offsets(f, y.family))
				if (off.target == o.family)
				{
					BasisIndex c{f, o.alpha - y.alpha - off.alpha_offset, o.i - y.i - off.index_shift};
					if (!covered(x, c))
						return false;
				}
			// [x, phi(y)]
			for (const TermOffset &off : rs.offsets(x.family, f))
				if (off.target == o.family)
				{
					BasisIndex c{f, o.alpha - x.alpha - off.alpha_offset, o.i - x.i - off.index_shift};
					if (!covered(y, c))
						return false;
				}
		}
		return true;
	}

private:
	// Is the coefficient phi(from)_to represented (or structurally zero)?
	bool covered(const BasisIndex &from, const BasisIndex &to) const
	{
		if (!keys_.contains({from.family, to.family, to.alpha - from.alpha}))
			return true;
		long k = to.i - from.i;
		return k >= kmin_ && k <= kmax_;
	}

	const AlgebraDef &alg_;
	long kmin_, kmax_;
	std::set<std::tuple<int, int, Scalar>> keys_;
};

template <class M>
const ShiftMap *as_formal(const M &m)
{
	if constexpr (std::same_as<M, ShiftMap>)
		return m.truncation() ? &m : nullptr;
	else
		return nullptr;
}

} // namespace detail

/**
 * Checks the 1/2-derivation identity on the given pairs.
 *
 * Without an output window and for maps without truncation the residuals are
 * exact. With `output_window`, residual coefficients are compared only on basis
 * elements inside it. A truncated ShiftMap (formal family) additionally compares
 * only the outputs whose every contributing coefficient lies inside the
 * truncation.
 */
template <BasisMap M>
HalfDerivationReport check_half_derivation(const AlgebraDef &alg, const M &phi, std::span<const BasisPair> pairs,
                                           const std::optional<Window> &output_window = std::nullopt)
{
	HalfDerivationReport report;
	std::optional<WindowIndex> out_index;
	if (output_window)
		out_index.emplace(alg, *output_window);
	std::optional<detail::FormalInterior> formal;
	if (const ShiftMap *f = detail::as_formal(phi))
		formal.emplace(alg, *f);

	for (auto &[x, y] : pairs)
	{
		++report.pairs_checked;
		Element r = half_derivation_residual(alg, phi, x, y);
		if (out_index || formal)
			r = r.filtered([&](const BasisIndex &o) {
				return (!out_index || out_index->contains(o)) && (!formal || formal->interior(x, y, o));
			});
		if (!r.is_zero())
			report.failures.push_back({x, y, std::move(r)});
	}
	return report;
}

template <BasisMap M>
HalfDerivationReport check_half_derivation(const AlgebraDef &alg, const M &phi, const std::vector<BasisPair> &pairs,
                                           const std::optional<Window> &output_window = std::nullopt)
{
	return check_half_derivation(alg, phi, std::span<const BasisPair>(pairs), output_window);
}

/// All ordered pairs of basis elements of a window.
inline std::vector<BasisPair> window_pairs(const AlgebraDef &alg, const Window &w)
{
	auto basis = enumerate_basis(alg, w);
	std::vector<BasisPair> out;
	out.reserve(basis.size() * basis.size());
	for (auto &x : basis)
		for (auto &y : basis)
			out.emplace_back(x, y);
	return out;
}

/// Commutator with an inner derivation: x -> map([x,z]) - [map(x), z].
template <BasisMap M>
LinearMap compose_ad(const M &map, const AlgebraDef &alg, const Element &z)
{
	alg.validate(z);
	return LinearMap([map, &alg, z](const BasisIndex &x) {
		Element out;
		for (auto &[b, c] : z)
		{
			Element xz = alg.bracket_basis(x, b);
			out.add_scaled(apply(map, xz), c);
		}
		Element mx = map(x);
		for (auto &[b, c] : mx)
			for (auto &[zb, zc] : z)
				alg.bracket_into(b, zb, -(c * zc), out);
		return out;
	});
}

// ---------------------------------------------------------------------------
// Closed-form families

/// Index shift t -> coefficient.
using ShiftCoeffs = std::map<long, Scalar>;

/**
 * 1/2-derivations of W(a,b) (families L=0, I=1):
 *   phi(L_m) = sum alpha_t L_{m+t} + sum beta_t I_{m+t},  phi(I_m) = sum alpha_t I_{m+t}.
 * For b != -1 only scalar multiples of the identity exist, so anything else is rejected.
 */
inline ShiftMap family_w_ab(const Scalar & /*a*/, const Scalar &b, const ShiftCoeffs &alphas, const ShiftCoeffs &betas)
{
	if (b != Scalar(-1))
	{
		bool trivial = true;
		for (auto &[t, c] : betas)
			trivial = trivial && c.is_zero();
		for (auto &[t, c] : alphas)
			trivial = trivial && (t == 0 || c.is_zero());
		if (!trivial)
			throw Error("W(a,b) with b != -1 has no non-trivial 1/2-derivations");
	}
	ShiftMap m;
	for (auto &[t, c] : alphas)
	{
		m.add({0, 0, Scalar(), t, c});
		m.add({1, 1, Scalar(), t, c});
	}
	for (auto &[t, c] : betas)
		m.add({0, 1, Scalar(), t, c});
	return m;
}

/**
 * 1/2-derivations of W(a,-1,1/2) (families L=0, I=1, Y=2):
 *   phi(L_m)       = sum alpha_t L_{m+t} + sum beta_t I_{m+t} + sum gamma_t Y_{m+t+1/2}
 *   phi(I_m)       = sum alpha_t I_{m+t}
 *   phi(Y_{m+1/2}) = sum alpha_t Y_{m+t+1/2} + sum gamma_t I_{m+t+1}
 */
inline ShiftMap family_w_a_minus1_half(const Scalar & /*a*/, const ShiftCoeffs &alphas, const ShiftCoeffs &betas,
                                       const ShiftCoeffs &gammas)
{
	ShiftMap m;
	for (auto &[t, c] : alphas)
	{
		m.add({0, 0, Scalar(), t, c});
		m.add({1, 1, Scalar(), t, c});
		m.add({2, 2, Scalar(), t, c});
	}
	for (auto &[t, c] : betas)
		m.add({0, 1, Scalar(), t, c});
	for (auto &[t, c] : gammas)
	{
		m.add({0, 2, Scalar(), t, c});
		m.add({2, 1, Scalar(), t + 1, c});
	}
	return m;
}

/// (group shift d, index shift m) -> coefficient.
using DegreeShiftCoeffs = std::map<std::pair<Scalar, long>, Scalar>;

/// 1/2-derivations of W_n(G): phi(L_{alpha,i}) = sum a^{d,m} L_{alpha+d, i+m}.
inline ShiftMap family_wn(const AlgebraDef &alg, const DegreeShiftCoeffs &seeds)
{
	ShiftMap m;
	for (auto &[key, c] : seeds)
	{
		if (!alg.in_group(key.first))
			throw Error("shift d = " + key.first.to_string() + " lies outside the group");
		m.add({0, 0, key.first, key.second, c});
	}
	return m;
}

/**
 * Coefficient a^{d,k} of a HW_n(G) 1/2-derivation, propagated from the seed
 * a^{d,seed_m} = seed_value by the recurrence d a^{d,k} + (k-n) a^{d,k-n} = 0.
 *
 * Forward steps use a^{d,k} = -((k-n)/d) a^{d,k-n}, backward steps
 * a^{d,k-n} = -(d/(k-n)) a^{d,k}. For n = 0 the recurrence reads (d+k) a^{d,k} = 0,
 * so the only nonzero coefficient is a^{d,-d} = seed_value (seed_m is ignored).
 */
inline Scalar hwn_coeff(long n, const Scalar &d, long seed_m, const Scalar &seed_value, long k)
{
	if (n == 0)
		return Scalar(k) == -d ? seed_value : Scalar();
	if (d.is_zero())
		throw Error("hwn_coeff requires d != 0 when n != 0");
	if ((k - seed_m) % n != 0)
		throw Error("k = " + std::to_string(k) + " is not congruent to " + std::to_string(seed_m) + " mod " +
		            std::to_string(n));
	long t = (k - seed_m) / n;
	Scalar v = seed_value;
	long cur = seed_m;
	for (; t > 0; --t)
	{
		cur += n;
		v = -(Scalar(cur - n) / d) * v;
	}
	for (; t < 0; ++t)
	{
		if (cur == n)
			throw DivisionByZero();
		v = -(d / Scalar(cur - n)) * v;
		cur -= n;
	}
	return v;
}

/**
 * Closed form of a^{d, m + t n} in terms of a^{d,m} (n != 0, d != 0):
 *   t >= 1:  (-1)^t d^{-t} prod_{p=0}^{t-1} (p n + m)
 *   t <= -1: d^{|t|} / prod_{p=1}^{|t|} (p n - m)
 * Used only to cross-check hwn_coeff.
 */
inline Scalar hwn_closed_form(long n, const Scalar &d, long m, const Scalar &seed_value, long t)
{
	if (n == 0 || d.is_zero())
		throw Error("closed form requires n != 0 and d != 0");
	Scalar v = seed_value;
	if (t >= 1)
	{
		Scalar prod(1);
		for (long p = 0; p < t; ++p)
			prod *= Scalar(p * n + m);
		Scalar dp(1);
		for (long p = 0; p < t; ++p)
			dp *= d;
		return (t % 2 ? -prod : prod) / dp * v;
	}
	if (t <= -1)
	{
		Scalar prod(1), dp(1);
		for (long p = 1; p <= -t; ++p)
		{
			prod *= Scalar(p * n - m);
			dp *= d;
		}
		return dp / prod * v;
	}
	return v;
}

/// Seed of a HW_n(G) family: a^{d,m} = value (m ignored for n = 0).
struct HwnSeed
{
	Scalar d;
	long m = 0;
	Scalar value;
};

/**
 * HW_n(G) family (families L=0, H=1) truncated to index shifts in k_window:
 *   phi(L_{alpha,i}) = sum_k a^{d,k} L_{alpha+d,i+k},  phi(H_{alpha,i}) = sum_k a^{d,k} H_{alpha+d,i+k}.
 * The result carries the truncation so the checker treats it as a formal family.
 */
inline ShiftMap family_hwn(const AlgebraDef &alg, const std::vector<HwnSeed> &seeds, std::pair<long, long> k_window)
{
	long n = alg.parameter("n").value_or(Scalar()).to_long();
	ShiftMap m;
	auto put = [&](const Scalar &d, long k, const Scalar &c) {
		m.add({0, 0, d, k, c});
		m.add({1, 1, d, k, c});
	};
	for (const HwnSeed &s : seeds)
	{
		if (!alg.in_group(s.d))
			throw Error("shift d = " + s.d.to_string() + " lies outside the group");
		if (n == 0)
		{
			if (!s.d.is_integer())
				throw Error("for n = 0 the shift d must lie in G and be an integer");
			long k = -s.d.to_long();
			if (k >= k_window.first && k <= k_window.second)
				put(s.d, k, s.value);
			continue;
		}
		if (s.d.is_zero())
		{
			if (s.m != 0)
				throw Error("for d = 0 only the seed a^{0,0} is allowed");
			if (0 >= k_window.first && 0 <= k_window.second)
				put(s.d, 0, s.value);
			continue;
		}
		for (long k = k_window.first; k <= k_window.second; ++k)
			if ((k - s.m) % n == 0)
				put(s.d, k, hwn_coeff(n, s.d, s.m, s.value, k));
	}
	m.set_truncation(k_window.first, k_window.second);
	return m;
}

// ---------------------------------------------------------------------------
// Window solver

/// The homogeneous system whose nullspace is the windowed space of 1/2-derivations of one grade shift.
struct HalfDerivationSystem
{
	Scalar grade_shift;
	Window w_in;
	Window w_out;
	std::shared_ptr<const std::vector<BasisIndex>> domain;   ///< basis of W_in
	std::shared_ptr<const std::vector<BasisIndex>> codomain; ///< basis of W_out
	/// unknown k is the entry (domain[first], codomain[second])
	std::vector<std::pair<std::size_t, std::size_t>> unknowns;
	std::vector<SparseVec> constraints;
	std::size_t pairs_used = 0;
	std::size_t equations_skipped = 0;
};

struct SolutionSpace
{
	std::vector<WindowMap> basis;
	std::size_t dimension = 0;
	Window w_in;
	Window w_out;
	Scalar grade_shift;
	/// Nullspace vectors in unknown coordinates (same order as basis).
	std::vector<SparseVec> vectors;
	std::shared_ptr<const HalfDerivationSystem> system;

	/// Coordinates of a map restricted to W_in x W_out in this space's unknown layout.
	template <BasisMap M>
	SparseVec coordinates(const M &map) const
	{
		std::map<BasisIndex, std::size_t> cpos;
		for (std::size_t k = 0; k < system->codomain->size(); ++k)
			cpos.emplace((*system->codomain)[k], k);
		std::map<std::pair<std::size_t, std::size_t>, std::size_t> upos;
		for (std::size_t k = 0; k < system->unknowns.size(); ++k)
			upos.emplace(system->unknowns[k], k);
		std::map<std::size_t, Scalar> v;
		for (std::size_t d = 0; d < system->domain->size(); ++d)
		{
			Element img = map((*system->domain)[d]);
			for (auto &[b, c] : img)
			{
				auto cp = cpos.find(b);
				if (cp == cpos.end())
					continue;
				auto u = upos.find({d, cp->second});
				if (u == upos.end())
					throw Error("map has a component of the wrong grade");
				v[u->second] += c;
			}
		}
		return to_sparse(v);
	}

	/// Exact membership of the windowed restriction of `map`.
	template <BasisMap M>
	bool contains(const M &map) const
	{
		Echelon e(system->unknowns.size());
		for (auto &v : vectors)
			e.insert(v);
		return e.in_span(coordinates(map));
	}
};

namespace detail {

inline std::shared_ptr<const std::vector<BasisIndex>> share(std::vector<BasisIndex> v)
{
	return std::make_shared<const std::vector<BasisIndex>>(std::move(v));
}

} // namespace detail

/**
 * Builds the constraint system for grade shift d.
 *
 * Unknowns: phi(b)_c for b in W_in and c in W_out with grade(c) = grade(b) + d.
 * For each unordered pair (x, y) of W_in with [x,y] inside W_in, one scalar
 * equation per output basis element o. An equation is kept only if o lies in
 * W_out and every basis element that could feed o through [phi(x), y] or
 * [x, phi(y)] lies in W_out; otherwise it is skipped. Skipping only removes
 * constraints, so every true 1/2-derivation restricts into the nullspace.
 */
inline HalfDerivationSystem build_half_derivation_system(const AlgebraDef &alg, const Scalar &d, const Window &w_in,
                                                         const Window &w_out)
{
	w_in.validate();
	w_out.validate();
	if (w_in.alpha_coeff_bound > w_out.alpha_coeff_bound || w_in.i_min < w_out.i_min || w_in.i_max > w_out.i_max)
		throw Error("input window must lie inside the output window");

	HalfDerivationSystem sys;
	sys.grade_shift = d;
	sys.w_in = w_in;
	sys.w_out = w_out;
	WindowIndex in_idx(alg, w_in), out_idx(alg, w_out);
	sys.domain = detail::share(in_idx.basis());
	sys.codomain = detail::share(out_idx.basis());
	const auto &dom = *sys.domain;
	const auto &cod = *sys.codomain;

	std::vector<Scalar> cod_grade(cod.size());
	for (std::size_t k = 0; k < cod.size(); ++k)
		cod_grade[k] = alg.grade(cod[k]);

	// unknowns, grouped by domain element
	std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_domain(dom.size()); // (codomain idx, unknown idx)
	std::map<std::pair<std::size_t, std::size_t>, std::size_t> unknown_of;
	for (std::size_t b = 0; b < dom.size(); ++b)
	{
		Scalar target = alg.grade(dom[b]) + d;
		for (std::size_t c = 0; c < cod.size(); ++c)
			if (cod_grade[c] == target)
			{
				unknown_of.emplace(std::pair{b, c}, sys.unknowns.size());
				by_domain[b].emplace_back(c, sys.unknowns.size());
				sys.unknowns.emplace_back(b, c);
			}
	}

	const auto &rs = alg.rule_system();
	const int nf = static_cast<int>(alg.families().size());
	static const Scalar minus_half = Scalar::fraction(-1, 2);

	// Could an element outside W_out feed output o via [c, y] (left) or [x, c] (right)?
	auto leaks = [&](const BasisIndex &x, const BasisIndex &y, const BasisIndex &o) {
		for (int f = 0; f < nf; ++f)
		{
			for (const TermOffset &off : rs.offsets(f, y.family))
				if (off.target == o.family)
				{
					BasisIndex c{f, o.alpha - y.alpha - off.alpha_offset, o.i - y.i - off.index_shift};
					if (!out_idx.contains(c) && alg.in_group(c.alpha) && !alg.bracket_basis(c, y).coeff(o).is_zero())
						return true;
				}
			for (const TermOffset &off : rs.offsets(x.family, f))
				if (off.target == o.family)
				{
					BasisIndex c{f, o.alpha - x.alpha - off.alpha_offset, o.i - x.i - off.index_shift};
					if (!out_idx.contains(c) && alg.in_group(c.alpha) && !alg.bracket_basis(x, c).coeff(o).is_zero())
						return true;
				}
		}
		return false;
	};

	for (std::size_t xi = 0; xi < dom.size(); ++xi)
		for (std::size_t yi = xi + 1; yi < dom.size(); ++yi)
		{
			const BasisIndex &x = dom[xi];
			const BasisIndex &y = dom[yi];
			Element xy = alg.bracket_basis(x, y);
			if (!in_idx.contains(xy))
				continue;
			std::map<BasisIndex, std::map<std::size_t, Scalar>> rows;
			for (auto &[b, c] : xy)
			{
				std::size_t bpos = static_cast<std::size_t>(in_idx.position(b));
				for (auto &[cp, u] : by_domain[bpos])
					rows[cod[cp]][u] += c;
			}
			for (auto &[cp, u] : by_domain[xi])
			{
				Element t = alg.bracket_basis(cod[cp], y);
				for (auto &[o, v] : t)
					rows[o][u] += minus_half * v;
			}
			for (auto &[cp, u] : by_domain[yi])
			{
				Element t = alg.bracket_basis(x, cod[cp]);
				for (auto &[o, v] : t)
					rows[o][u] += minus_half * v;
			}
			bool used = false;
			for (auto &[o, row] : rows)
			{
				SparseVec r = to_sparse(row);
				if (r.empty())
					continue;
				if (!out_idx.contains(o) || leaks(x, y, o))
				{
					++sys.equations_skipped;
					continue;
				}
				sys.constraints.push_back(std::move(r));
				used = true;
			}
			if (used)
				++sys.pairs_used;
		}
	return sys;
}

/// Exact nullspace of the windowed system, as WindowMaps in reduced-echelon order.
inline SolutionSpace solve_half_derivations(const AlgebraDef &alg, const Scalar &d, const Window &w_in,
                                            const Window &w_out)
{
	auto sys = std::make_shared<HalfDerivationSystem>(build_half_derivation_system(alg, d, w_in, w_out));
	if (sys->domain->empty())
		throw Error("empty input window");
	Echelon e(sys->unknowns.size());
	for (auto &row : sys->constraints)
		e.insert(row);
	SolutionSpace space;
	space.vectors = e.nullspace();
	space.dimension = space.vectors.size();
	space.w_in = w_in;
	space.w_out = w_out;
	space.grade_shift = d;
	for (auto &v : space.vectors)
	{
		std::vector<SparseVec> rows(sys->domain->size());
		for (auto &[u, x] : v)
		{
			auto [b, c] = sys->unknowns[u];
			rows[b].emplace_back(c, x);
		}
		for (auto &r : rows)
			std::sort(r.begin(), r.end(), [](auto &a, auto &b) { return a.first < b.first; });
		space.basis.emplace_back(sys->domain, sys->codomain, std::move(rows));
	}
	space.system = std::move(sys);
	return space;
}

/// Re-checks every constraint against every basis vector; returns the number of violations.
inline std::size_t verify_solution_space(const SolutionSpace &space)
{
	std::size_t bad = 0;
	for (auto &v : space.vectors)
		for (auto &row : space.system->constraints)
			if (!dot(row, v).is_zero())
				++bad;
	return bad;
}

// ---------------------------------------------------------------------------
// Interior classification

struct InteriorClassification
{
	Window core;
	std::vector<ShiftMap> fitted;        ///< reduced-echelon basis of the shift-type part
	std::size_t interior_dimension = 0;  ///< = fitted.size()
	std::size_t restricted_dimension = 0;
	std::size_t non_shift_dimension = 0; ///< restricted_dimension - interior_dimension
	std::vector<bool> solution_is_shift_type;
	bool boundary_polluted() const { return non_shift_dimension != 0; }

	/// Fitted maps whose every term has the given (source, target, alpha shift, index shift) key.
	std::size_t cell_dimension(int source, int target, const Scalar &alpha_shift, long i_shift) const
	{
		std::size_t n = 0;
		for (auto &m : fitted)
			if (std::all_of(m.terms().begin(), m.terms().end(), [&](const ShiftTerm &t) {
				    return t.source == source && t.target == target && t.alpha_shift == alpha_shift && t.i_shift == i_shift;
			    }))
				++n;
		return n;
	}
};

/// Default core: W_in with the index range shrunk by ceil(|grade shift|) + 1 on both sides.
inline Window default_core(const SolutionSpace &space)
{
	const Scalar &d = space.grade_shift;
	Rational mag = abs(d.re()) + abs(d.im());
	mpz_class c;
	mpz_cdiv_q(c.get_mpz_t(), mag.get_num_mpz_t(), mag.get_den_mpz_t());
	long shrink = c.get_si() + 1;
	return space.w_in.shrunk(shrink);
}

/**
 * Restricts every solution to domain elements inside `core` and intersects the
 * restricted space with the constant-coefficient shift maps that are fully
 * representable on the core. The intersection is the interior part; anything
 * left over is window-boundary pollution.
 */
inline InteriorClassification classify_interior(const AlgebraDef &alg, const SolutionSpace &space, const Window &core)
{
	const Window &win = space.w_in;
	core.validate();
	if (core.alpha_coeff_bound > win.alpha_coeff_bound || core.i_min <= win.i_min || core.i_max >= win.i_max)
		throw Error("core window must lie strictly inside the input window");

	InteriorClassification out;
	out.core = core;
	if (space.dimension == 0)
		return out;

	const auto &sys = *space.system;
	const auto &dom = *sys.domain;
	const auto &cod = *sys.codomain;
	WindowIndex core_idx(alg, core);
	WindowIndex out_idx(alg, space.w_out);

	std::map<std::pair<std::size_t, std::size_t>, std::size_t> unknown_of;
	for (std::size_t u = 0; u < sys.unknowns.size(); ++u)
		unknown_of.emplace(sys.unknowns[u], u);
	std::map<BasisIndex, std::size_t> dom_pos;
	for (std::size_t k = 0; k < dom.size(); ++k)
		dom_pos.emplace(dom[k], k);

	using Key = std::tuple<int, int, Scalar, long>;
	std::set<Key> candidate_keys;
	std::vector<char> in_core(sys.unknowns.size(), 0);
	for (std::size_t u = 0; u < sys.unknowns.size(); ++u)
	{
		auto [b, c] = sys.unknowns[u];
		if (!core_idx.contains(dom[b]))
			continue;
		in_core[u] = 1;
		candidate_keys.insert({dom[b].family, cod[c].family, cod[c].alpha - dom[b].alpha, cod[c].i - dom[b].i});
	}

	// E_K for every key representable on the whole core
	std::vector<Key> keys;
	std::vector<SparseVec> shifts;
	for (const Key &k : candidate_keys)
	{
		auto &[src, tgt, da, di] = k;
		std::map<std::size_t, Scalar> v;
		bool ok = true;
		for (const BasisIndex &b : core_idx.basis())
		{
			if (b.family != src)
				continue;
			long cp = out_idx.position({tgt, b.alpha + da, b.i + di});
			auto u = cp < 0 ? unknown_of.end() : unknown_of.find({dom_pos.at(b), static_cast<std::size_t>(cp)});
			if (u == unknown_of.end())
			{
				ok = false;
				break;
			}
			v[u->second] = Scalar(1);
		}
		if (ok && !v.empty())
		{
			keys.push_back(k);
			shifts.push_back(to_sparse(v));
		}
	}

	std::vector<SparseVec> restricted;
	for (auto &v : space.vectors)
	{
		SparseVec r;
		for (auto &[u, x] : v)
			if (in_core[u])
				r.emplace_back(u, x);
		restricted.push_back(std::move(r));
	}
	out.restricted_dimension = rank_of(restricted, sys.unknowns.size());

	Echelon shift_span(sys.unknowns.size());
	for (auto &e : shifts)
		shift_span.insert(e);
	for (auto &r : restricted)
		out.solution_is_shift_type.push_back(shift_span.in_span(r));

	// sum lambda_K E_K - sum mu_j r_j = 0, one equation per unknown
	const std::size_t q = shifts.size(), p = restricted.size();
	std::map<std::size_t, std::map<std::size_t, Scalar>> eq;
	for (std::size_t k = 0; k < q; ++k)
		for (auto &[u, x] : shifts[k])
			eq[u][k] += x;
	for (std::size_t j = 0; j < p; ++j)
		for (auto &[u, x] : restricted[j])
			eq[u][q + j] -= x;
	Echelon sysq(q + p);
	for (auto &[u, row] : eq)
		sysq.insert(to_sparse(row));
	Echelon lambdas(q);
	for (auto &v : sysq.nullspace())
	{
		SparseVec l;
		for (auto &[c, x] : v)
			if (c < q)
				l.emplace_back(c, x);
		lambdas.insert(l);
	}
	for (auto &row : lambdas.rref())
	{
		ShiftMap m;
		for (auto &[k, x] : row)
		{
			auto &[src, tgt, da, di] = keys[k];
			m.add({src, tgt, da, di, x});
		}
		out.fitted.push_back(std::move(m));
	}
	out.interior_dimension = out.fitted.size();
	out.non_shift_dimension = out.restricted_dimension - out.interior_dimension;
	return out;
}

inline InteriorClassification classify_interior(const AlgebraDef &alg, const SolutionSpace &space)
{
	return classify_interior(alg, space, default_core(space));
}

} // namespace witt
