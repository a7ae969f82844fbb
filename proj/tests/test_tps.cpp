#include "witt/catalog.hpp"
#include "witt/tps.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace witt;

namespace {

Scalar q(long n, long d = 1) { return Scalar::fraction(n, d); }
BasisIndex B(int f, long i) { return {f, Scalar(), i}; }
BasisIndex G(int f, const Scalar &a, long i) { return {f, a, i}; }
Element E(const BasisIndex &b, const Scalar &c = Scalar(1)) { return Element(b, c); }

Element random_element(std::mt19937 &rng, const std::vector<BasisIndex> &basis, int max_support)
{
	std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
	std::uniform_int_distribution<int> support(1, max_support), num(-4, 4), den(1, 3);
	Element x;
	for (int k = support(rng); k > 0; --k)
	{
		int n = num(rng);
		x.add(basis[pick(rng)], q(n == 0 ? 1 : n, den(rng)));
	}
	return x;
}

} // namespace

TEST(Product, PlainW)
{
	auto alg = make_w_abs(q(0), q(-1));
	auto W = plain_w(alg);
	EXPECT_EQ(W.mul(E(B(0, 2)), E(B(0, 3))), E(B(0, 5)));
	EXPECT_EQ(W.mul(E(B(2, 0)), E(B(2, 1))), E(B(1, 2)));
	EXPECT_EQ(W.mul(E(B(1, 4)), E(B(0, -1))), E(B(1, 3)));
	EXPECT_TRUE(W.mul(E(B(1, 4)), E(B(2, -1))).is_zero());
	EXPECT_TRUE(W.mul(E(B(1, 4)), E(B(1, 1))).is_zero());
	EXPECT_THROW(plain_w(make_hwn_g(1)).mul_basis(B(5, 0), B(0, 0)), Error);
}

TEST(Product, UnitMutation)
{
	auto alg = make_w_abs(q(0), q(-1));
	MutationProduct M(plain_w(alg), E(B(0, 0)));
	std::mt19937 rng(11);
	auto basis = enumerate_basis(alg, {0, -3, 3});
	for (int k = 0; k < 30; ++k)
	{
		Element x = random_element(rng, basis, 3), y = random_element(rng, basis, 3);
		EXPECT_EQ(M.mul(x, y), M.base().mul(x, y));
	}
}

TEST(Product, Mutation)
{
	auto alg = make_w_ab(q(0), q(-1));
	Element w = E(B(0, 1), q(2));
	w += E(B(1, 0));
	MutationProduct M(plain_w(alg), w);
	for (long m = -2; m <= 2; ++m)
		for (long n = -2; n <= 2; ++n)
			EXPECT_EQ(M.mul(E(B(0, m)), E(B(1, n))), E(B(1, m + n + 1), q(2)));
}

TEST(Product, Bilinear)
{
	auto alg = make_w_abs(q(1, 2), q(-1));
	MutationProduct M(plain_w(alg), E(B(2, 1)) + E(B(0, -1), q(3)));
	std::mt19937 rng(5);
	auto basis = enumerate_basis(alg, {0, -3, 3});
	for (int k = 0; k < 30; ++k)
	{
		Element x = random_element(rng, basis, 3), y = random_element(rng, basis, 3), z = random_element(rng, basis, 3);
		Scalar c = q(k - 7, 3);
		Element lhs = M.mul(x + c * y, z);
		Element rhs = M.mul(x, z) + c * M.mul(y, z);
		EXPECT_EQ(lhs, rhs);
	}
}

TEST(CheckTps, MutationOfPlainW)
{
	auto alg = make_w_abs(q(0), q(-1));
	auto rep = check_tps(MutationProduct(plain_w(alg), E(B(0, 1))), alg, {0, -3, 3});
	EXPECT_TRUE(rep.commutative.holds);
	EXPECT_TRUE(rep.associative.holds);
	EXPECT_TRUE(rep.compatible.holds);
	EXPECT_TRUE(rep.ok());
	EXPECT_FALSE(rep.leibniz.holds);
	ASSERT_TRUE(rep.leibniz.witness);
	auto &t = rep.leibniz.witness->tuple;
	ASSERT_EQ(t.size(), 3u);
	EXPECT_EQ(leibniz_residual(MutationProduct(plain_w(alg), E(B(0, 1))), alg, E(t[0]), E(t[1]), E(t[2])),
	          rep.leibniz.witness->residual);
}

TEST(CheckTps, PlainWOnNonCriticalB)
{
	auto alg = make_w_abs(q(0), q(0));
	auto p = plain_w(alg);
	auto rep = check_tps(p, alg, {0, -3, 3});
	EXPECT_TRUE(rep.commutative.holds);
	EXPECT_TRUE(rep.associative.holds);
	ASSERT_FALSE(rep.compatible.holds);
	auto &wit = *rep.compatible.witness;
	EXPECT_FALSE(wit.residual.is_zero());
	EXPECT_EQ(compat_residual(p, alg, E(wit.tuple[0]), E(wit.tuple[1]), E(wit.tuple[2])), wit.residual);
}

TEST(CheckTps, ZeroProduct)
{
	auto alg = make_wn_g(1);
	auto rep = check_tps(zero_product(alg), alg, {1, -2, 2});
	EXPECT_TRUE(rep.ok());
	EXPECT_TRUE(rep.leibniz.holds);
	EXPECT_TRUE(check_poisson(zero_product(alg), alg, {1, -2, 2}).holds);
}

TEST(CheckPoisson, UnitMutationOnWn)
{
	auto alg = make_wn_g(1);
	auto chk = check_poisson(MutationProduct(plain_w(alg), E(G(0, q(0), 0))), alg, {1, -2, 2});
	EXPECT_FALSE(chk.holds);
	ASSERT_TRUE(chk.witness);
	EXPECT_FALSE(chk.witness->residual.is_zero());
}

TEST(LeftMult, IsShiftFamily)
{
	auto alg = make_w_abs(q(0), q(-1));
	MutationProduct p(plain_w(alg), E(B(0, 1)));
	auto lm = left_mult_map(p, E(B(0, 0)));
	auto alpha1 = family_w_a_minus1_half(q(0), {{1, q(1)}}, {}, {});
	for (auto &b : enumerate_basis(alg, {0, -4, 4}))
		EXPECT_EQ(lm(b), alpha1(b));
	EXPECT_TRUE(check_half_derivation(alg, lm, window_pairs(alg, {0, -3, 3})).ok());
}

TEST(LeftMult, HalfDerivationForEveryInteriorZ)
{
	auto alg = make_wn_g(2);
	Element w = E(G(0, q(1), 1)) + E(G(0, q(0), -2), q(-3));
	MutationProduct p(plain_w(alg), w);
	ASSERT_TRUE(check_tps(p, alg, {1, -2, 2}).ok());
	for (auto &z : enumerate_basis(alg, {1, -1, 1}))
		EXPECT_TRUE(check_half_derivation(alg, left_mult_map(p, E(z)), window_pairs(alg, {1, -2, 2})).ok());
}

TEST(MutationProperty, Associative)
{
	std::mt19937 rng(21);
	for (auto alg : {make_w_abs(q(2), q(-1)), make_wn_g(1)})
	{
		auto basis = enumerate_basis(alg, {1, -2, 2});
		for (int k = 0; k < 4; ++k)
		{
			MutationProduct p(plain_w(alg), random_element(rng, basis, 3));
			EXPECT_TRUE(check_tps(p, alg, {1, -2, 2}).associative.holds);
		}
	}
}

TEST(FamilyBasis, Shapes)
{
	EXPECT_EQ(standard_family_basis(make_witt(), {0, -2, 2}).size(), 5u);
	EXPECT_EQ(standard_family_basis(make_w_ab(q(0), q(2)), {0, -2, 2}).size(), 1u);
	EXPECT_EQ(standard_family_basis(make_w_ab(q(0), q(-1)), {0, -2, 2}).size(), 10u);
	EXPECT_EQ(standard_family_basis(make_w_abs(q(0), q(-1)), {0, -1, 1}).size(), 9u);
	EXPECT_EQ(standard_family_basis(make_wn_g(2), {1, -1, 1}).size(), 9u);
	for (auto &g : standard_family_basis(make_hwn_g(1), {1, -3, 3}))
		EXPECT_TRUE(g.map.truncation());
}

TEST(SolveTps, WnGivesMutations)
{
	auto alg = make_wn_g(2);
	auto fb = standard_family_basis(alg, {1, -1, 1});
	Window win{1, -3, 3};
	auto res = solve_tps(alg, fb, win);
	EXPECT_EQ(res.solution_dimension, fb.size());
	EXPECT_EQ(res.rejected, 0u);
	ASSERT_EQ(res.solutions.size(), fb.size() + 1);
	EXPECT_TRUE(res.solutions[0].trivial);
	auto W = plain_w(alg);
	auto pairs = window_pairs(alg, win);
	for (std::size_t k = 1; k < res.solutions.size(); ++k)
	{
		auto &s = res.solutions[k];
		EXPECT_FALSE(s.trivial);
		EXPECT_TRUE(s.report.ok());
		EXPECT_FALSE(s.w.is_zero());
		MutationProduct m(W, s.w);
		for (auto &[x, y] : pairs)
			ASSERT_EQ(s.product.mul_basis(x, y), m.mul_basis(x, y));
	}
}

TEST(SolveTps, HwnOnlyZero)
{
	auto alg = make_hwn_g(1);
	auto res = solve_tps(alg, standard_family_basis(alg, {1, -3, 3}), {1, -3, 3});
	ASSERT_EQ(res.solutions.size(), 1u);
	EXPECT_TRUE(res.solutions[0].trivial);
	EXPECT_EQ(res.solution_dimension, 0u);
}

TEST(SolveTps, EmptyBasisAndBadGenerator)
{
	auto alg = make_witt();
	auto res = solve_tps(alg, {}, {0, -2, 2});
	ASSERT_EQ(res.solutions.size(), 1u);
	EXPECT_TRUE(res.solutions[0].w.is_zero());
	ShiftMap bad({ShiftTerm{0, 0, Scalar(), 1, q(1)}, ShiftTerm{0, 0, Scalar(), 0, q(0)}});
	EXPECT_NO_THROW(solve_tps(alg, {{"alpha", bad}}, {0, -2, 2}));
	auto wab = make_w_ab(q(0), q(0));
	EXPECT_THROW(solve_tps(wab, {{"bad", ShiftMap({ShiftTerm{0, 1, Scalar(), 0, q(1)}})}}, {0, -2, 2}), Error);
}
