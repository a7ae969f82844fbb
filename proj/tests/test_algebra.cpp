#include "witt/catalog.hpp"
#include "witt/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace witt;

namespace {

Scalar q(long n, long d = 1) { return Scalar::fraction(n, d); }
BasisIndex B(int f, long i) { return {f, Scalar(), i}; }
BasisIndex G(int f, const Scalar &a, long i) { return {f, a, i}; }
Element E(const BasisIndex &b, const Scalar &c = Scalar(1)) { return Element(b, c); }

// Structure constants written out directly from the multiplication tables.
Element oracle_w_abs(const Scalar &a, const Scalar &b, const BasisIndex &x, const BasisIndex &y)
{
	const Scalar m(x.i), n(y.i);
	auto half = q(1, 2);
	int L = 0, I = 1, Y = 2;
	if (x.family == L && y.family == L)
		return E(B(L, x.i + y.i), n - m);
	if (x.family == L && y.family == I)
		return E(B(I, x.i + y.i), n + b * m + a);
	if (x.family == I && y.family == L)
		return E(B(I, x.i + y.i), -(m + b * n + a));
	if (x.family == L && y.family == Y)
		return E(B(Y, x.i + y.i), n + half + ((b - Scalar(1)) * m + a) * half);
	if (x.family == Y && y.family == L)
		return E(B(Y, x.i + y.i), -(m + half + ((b - Scalar(1)) * n + a) * half));
	if (x.family == Y && y.family == Y)
		return E(B(I, x.i + y.i + 1), n - m);
	return {};
}

Element oracle_hwn(long nn, const BasisIndex &x, const BasisIndex &y)
{
	int L = 0, H = 1;
	Element out;
	auto ab = x.alpha + y.alpha;
	if (x.family == L && y.family == L)
	{
		out.add(G(L, ab, x.i + y.i), y.alpha - x.alpha);
		out.add(G(L, ab, x.i + y.i + nn), Scalar(y.i - x.i));
	}
	else if (x.family == L && y.family == H)
	{
		out.add(G(H, ab, x.i + y.i), y.alpha);
		out.add(G(H, ab, x.i + y.i + nn), Scalar(y.i));
	}
	else if (x.family == H && y.family == L)
	{
		out.add(G(H, ab, x.i + y.i), -x.alpha);
		out.add(G(H, ab, x.i + y.i + nn), Scalar(-x.i));
	}
	return out;
}

} // namespace

TEST(Element, CanonicalForm)
{
	Element x = E(B(0, 1), q(2)) + E(B(0, 1), q(-2));
	EXPECT_TRUE(x.is_zero());
	Element y = E(B(0, 3)) + E(B(0, -1), q(5));
	EXPECT_EQ(y.begin()->first.i, -1);
	EXPECT_EQ((y * q(0)).size(), 0u);
	EXPECT_EQ(y.coeff(B(0, 3)), q(1));
}

TEST(Catalog, WittBracket)
{
	auto w = make_witt();
	EXPECT_EQ(bracket(w, E(B(0, 2)), E(B(0, 3))), E(B(0, 5)));
	EXPECT_EQ(bracket(w, E(B(0, 3)), E(B(0, 2))), E(B(0, 5), q(-1)));
	EXPECT_TRUE(bracket(w, E(B(0, 4)), E(B(0, 4))).is_zero());
	EXPECT_EQ(w.format(E(B(0, 5), q(-1))), "-1*L(5)");
}

TEST(Catalog, WabsAgainstTable)
{
	std::mt19937 rng(11);
	for (auto [a, b] : std::vector<std::pair<Scalar, Scalar>>{{q(1), q(-1)}, {q(0), q(2)}, {Scalar(q(3, 2).re(), Rational(-2)), q(1, 3)}})
	{
		auto alg = make_w_abs(a, b);
		auto basis = enumerate_basis(alg, {0, -4, 4});
		std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
		for (int k = 0; k < 200; ++k)
		{
			auto x = basis[pick(rng)], y = basis[pick(rng)];
			EXPECT_EQ(alg.bracket_basis(x, y), oracle_w_abs(a, b, x, y)) << alg.format(x) << " " << alg.format(y);
		}
	}
}

TEST(Catalog, WabIsSubalgebraOfWabs)
{
	auto wab = make_w_ab(q(2), q(-1));
	auto wabs = make_w_abs(q(2), q(-1));
	for (auto &x : enumerate_basis(wab, {0, -3, 3}))
		for (auto &y : enumerate_basis(wab, {0, -3, 3}))
			EXPECT_EQ(wab.bracket_basis(x, y), wabs.bracket_basis(x, y));
}

TEST(Catalog, HwnAgainstTable)
{
	for (long n : {-1, 0, 2})
	{
		auto alg = make_hwn_g(n, {q(1), q(1, 2)});
		for (auto &x : enumerate_basis(alg, {1, -2, 2}))
			for (auto &y : enumerate_basis(alg, {1, -2, 2}))
				EXPECT_EQ(alg.bracket_basis(x, y), oracle_hwn(n, x, y));
	}
}

TEST(Catalog, Errors)
{
	EXPECT_THROW(catalog("nope", {}), Error);
	EXPECT_THROW(catalog("w_ab", CatalogParams{}.set("a", q(1))), Error);
	EXPECT_THROW(catalog("wn_g", CatalogParams{}.set("n", q(1))), Error);
	EXPECT_THROW(catalog("wn_g", CatalogParams{}.set("n", q(1, 2)).gen(q(1))), Error);
	EXPECT_THROW(catalog("witt", CatalogParams{}.gen(q(1))), Error);
	EXPECT_EQ(catalog_names().size(), 5u);
}

TEST(Algebra, GroupValidation)
{
	auto alg = make_wn_g(1, {q(1, 2)});
	EXPECT_NO_THROW(alg.validate(G(0, q(3, 2), 0)));
	EXPECT_THROW(alg.validate(G(0, q(1, 3), 0)), Error);
	EXPECT_THROW(bracket(alg, E(G(0, q(1, 3), 0)), E(G(0, q(0), 0))), Error);
	EXPECT_THROW(make_witt().validate(B(3, 0)), Error);
}

TEST(Algebra, GroupLatticeMembership)
{
	std::vector<Scalar> gens{Scalar(Rational(1), Rational(1)), Scalar(Rational(1), Rational(-1))};
	GroupLattice lat(gens);
	EXPECT_TRUE(lat.contains(q(2)));
	EXPECT_TRUE(lat.contains(Scalar(Rational(0), Rational(2))));
	EXPECT_FALSE(lat.contains(q(1)));
	EXPECT_TRUE(lat.contains(Scalar(Rational(3), Rational(1))));
	std::vector<Scalar> g2{q(2, 3), q(1, 2)};
	GroupLattice l2(g2);
	EXPECT_TRUE(l2.contains(q(1, 6)));
	EXPECT_FALSE(l2.contains(q(1, 12)));
}

TEST(Algebra, Grading)
{
	auto alg = make_w_abs(q(0), q(-1));
	EXPECT_EQ(grade(alg, B(2, 3)), q(7, 2));
	auto wn = make_wn_g(2);
	EXPECT_EQ(grade(wn, G(0, q(2), 5)), q(2));
	// every bracket term lands in grade(x) + grade(y)
	for (auto &x : enumerate_basis(alg, {0, -3, 3}))
		for (auto &y : enumerate_basis(alg, {0, -3, 3}))
			for (auto &[b, c] : alg.bracket_basis(x, y))
				EXPECT_EQ(grade(alg, b), grade(alg, x) + grade(alg, y));
}

TEST(Algebra, Antisymmetry)
{
	for (auto alg : {make_w_abs(q(1), q(-1)), make_hwn_g(1)})
	{
		Window w{1, -3, 3};
		for (auto &x : enumerate_basis(alg, w))
			for (auto &y : enumerate_basis(alg, w))
				EXPECT_TRUE((alg.bracket_basis(x, y) + alg.bracket_basis(y, x)).is_zero());
	}
}

TEST(Algebra, Bilinearity)
{
	auto alg = make_w_abs(q(1), q(-1));
	Element x = E(B(0, 1), q(2)) + E(B(2, 0), q(1, 3));
	Element y = E(B(1, -2)) + E(B(2, 1), q(-1));
	Element z = E(B(0, 3), q(5));
	EXPECT_EQ(bracket(alg, x + z, y), bracket(alg, x, y) + bracket(alg, z, y));
	EXPECT_EQ(bracket(alg, x * q(3), y), bracket(alg, x, y) * q(3));
}

TEST(Algebra, JacobiSmallWindows)
{
	EXPECT_TRUE(check_jacobi(make_witt(), {0, -4, 4}).ok());
	EXPECT_TRUE(check_jacobi(make_w_abs(q(1, 2), q(3)), {0, -3, 3}).ok());
	EXPECT_TRUE(check_jacobi(make_wn_g(-1), {1, -2, 2}).ok());
	EXPECT_TRUE(check_jacobi(make_hwn_g(2, {Scalar(Rational(1), Rational(1))}), {1, -2, 2}).ok());
}

TEST(Algebra, CorruptedRuleIsCaught)
{
	// [L(m), L(n)] = (n + m) L(m + n): symmetric, not a Lie bracket
	FamilyDecl L{"L", Rational(0), Scalar(0), Scalar(1)};
	Rule r{0, 0, {RuleTerm{0, Scalar(), {}, Poly::var(poly_var::i_left) + Poly::var(poly_var::i_right)}}};
	AlgebraDef bad("bad", {}, {}, {L}, {r});
	EXPECT_FALSE(bad.rule_system().structurally_consistent());
	auto rep = check_jacobi(bad, {0, 0, 2});
	ASSERT_FALSE(rep.ok());
	// hand expansion at (L0, L1, L2): 3*3 + 3*2 + 3*1 = 18
	EXPECT_EQ(jacobi_residual(bad, B(0, 0), B(0, 1), B(0, 2)), E(B(0, 3), q(18)));
}

TEST(Algebra, DefinitionErrors)
{
	FamilyDecl L{"L", Rational(0), Scalar(0), Scalar(1)};
	Poly c = Poly::var(poly_var::i_right);
	// grade mismatch: index shift 1 breaks homogeneity
	EXPECT_THROW(AlgebraDef("x", {}, {}, {L}, {Rule{0, 0, {RuleTerm{0, Scalar(), {1, {}}, c}}}}), DefinitionError);
	EXPECT_THROW(AlgebraDef("x", {}, {}, {L, L}, {}), DefinitionError);
	EXPECT_THROW(AlgebraDef("x", {}, {}, {L}, {Rule{0, 1, {}}}), DefinitionError);
	EXPECT_THROW(AlgebraDef("x", {}, {}, {L}, {Rule{0, 0, {}}, Rule{0, 0, {}}}), DefinitionError);
	EXPECT_THROW(AlgebraDef("x", {}, {Scalar()}, {L}, {}), DefinitionError);
}

TEST(Algebra, WindowEnumeration)
{
	auto alg = make_hwn_g(1, {q(1), q(2)});
	// generator coordinates in [-1,1]^2 give the distinct values -3..3
	auto alphas = window_alphas(alg, {1, 0, 0});
	EXPECT_EQ(alphas.size(), 7u);
	auto basis = enumerate_basis(alg, {1, -1, 1});
	EXPECT_EQ(basis.size(), 2u * 7u * 3u);
	WindowIndex idx(alg, {1, -1, 1});
	for (std::size_t k = 0; k < basis.size(); ++k)
		EXPECT_EQ(idx.position(basis[k]), static_cast<long>(k));
	EXPECT_FALSE(idx.contains(G(0, q(4), 0)));
	EXPECT_THROW(enumerate_basis(alg, {1, 2, 1}), Error);
}

TEST(Linalg, NullspaceOfKnownMatrix)
{
	// x0 + x1 + x2 = 0, x1 - x3 = 0
	Echelon e(4);
	e.insert({{0, q(1)}, {1, q(1)}, {2, q(1)}});
	e.insert({{1, q(1)}, {3, q(-1)}});
	EXPECT_EQ(e.rank(), 2u);
	auto ns = e.nullspace();
	ASSERT_EQ(ns.size(), 2u);
	// free columns 2 and 3
	EXPECT_EQ(ns[0], (SparseVec{{0, q(-1)}, {2, q(1)}}));
	EXPECT_EQ(ns[1], (SparseVec{{0, q(-1)}, {1, q(1)}, {3, q(1)}}));
	EXPECT_FALSE(e.insert({{0, q(2)}, {1, q(3)}, {2, q(2)}, {3, q(-1)}}));
}

TEST(Linalg, RandomNullspaceIsAnnihilated)
{
	std::mt19937 rng(3);
	std::uniform_int_distribution<long> v(-3, 3);
	for (int trial = 0; trial < 20; ++trial)
	{
		std::vector<SparseVec> rows;
		for (int r = 0; r < 6; ++r)
		{
			std::map<std::size_t, Scalar> m;
			for (std::size_t c = 0; c < 9; ++c)
				if (long x = v(rng); x != 0 && v(rng) > 0)
					m[c] = Scalar(Rational(x, 1 + (c % 3)), Rational(c % 2 ? x : 0));
			rows.push_back(to_sparse(m));
		}
		Echelon e(9);
		for (auto &r : rows)
			e.insert(r);
		auto ns = e.nullspace();
		EXPECT_EQ(ns.size() + e.rank(), 9u);
		for (auto &n : ns)
			for (auto &r : rows)
				EXPECT_TRUE(dot(r, n).is_zero());
		EXPECT_EQ(rank_of(ns, 9), ns.size());
	}
}
