#pragma once

// JSON rendering of algebras, elements, maps and check reports.
// nlohmann::json objects keep keys sorted, so dumps are byte-stable.

#include "witt/dsl.hpp"

#include "json.hpp"

namespace witt::report {

using json = nlohmann::json;

inline json scalar(const Scalar &c) { return c.to_string(); }

inline json basis(const AlgebraDef &alg, const BasisIndex &b)
{
	json j{{"family", alg.families().at(b.family).name}, {"i", b.i}};
	if (alg.has_group())
		j["alpha"] = scalar(b.alpha);
	return j;
}

/// Element as a list of {family, alpha, i, coeff} records in canonical order.
inline json element(const AlgebraDef &alg, const Element &x)
{
	json arr = json::array();
	for (auto &[b, c] : x)
	{
		json j = basis(alg, b);
		j["coeff"] = scalar(c);
		arr.push_back(std::move(j));
	}
	return arr;
}

inline json window(const Window &w)
{
	return {{"gen_bound", w.alpha_coeff_bound}, {"imin", w.i_min}, {"imax", w.i_max}};
}

inline json algebra(const AlgebraDef &alg)
{
	json params = json::object();
	for (auto &[k, v] : alg.parameters())
		params[k] = scalar(v);
	json gens = json::array();
	for (auto &g : alg.generators())
		gens.push_back(scalar(g));
	json fams = json::array();
	for (auto &f : alg.families())
		fams.push_back(f.name);
	return {{"name", alg.name()}, {"parameters", params}, {"generators", gens}, {"families", fams}};
}

inline json shift_map(const AlgebraDef &alg, const ShiftMap &m)
{
	json terms = json::array();
	for (const ShiftTerm &t : m.terms())
		terms.push_back({{"source", alg.families().at(t.source).name},
		                 {"target", alg.families().at(t.target).name},
		                 {"alpha_shift", scalar(t.alpha_shift)},
		                 {"i_shift", t.i_shift},
		                 {"coeff", scalar(t.coeff)}});
	json j{{"terms", terms}};
	if (m.truncation())
		j["truncation"] = {m.truncation()->first, m.truncation()->second};
	return j;
}

inline json tuple(const AlgebraDef &alg, const std::vector<BasisIndex> &t)
{
	json arr = json::array();
	for (auto &b : t)
		arr.push_back(basis(alg, b));
	return arr;
}

inline json identity_check(const AlgebraDef &alg, const IdentityCheck &c)
{
	json j{{"holds", c.holds}, {"checked", c.checked}, {"witness", nullptr}};
	if (c.witness)
		j["witness"] = {{"tuple", tuple(alg, c.witness->tuple)}, {"residual", element(alg, c.witness->residual)}};
	return j;
}

inline json tps(const AlgebraDef &alg, const TpsReport &r)
{
	return {{"commutative", identity_check(alg, r.commutative)},
	        {"associative", identity_check(alg, r.associative)},
	        {"compatible", identity_check(alg, r.compatible)},
	        {"leibniz", identity_check(alg, r.leibniz)},
	        {"transposed_poisson", r.ok()}};
}

/// At most `limit` listed entries; the full count is always reported.
inline json jacobi(const AlgebraDef &alg, const ViolationReport &r, std::size_t limit = 20)
{
	json list = json::array();
	for (std::size_t k = 0; k < r.violations.size() && k < limit; ++k)
	{
		auto &v = r.violations[k];
		list.push_back({{"triple", tuple(alg, {v.triple.begin(), v.triple.end()})}, {"residual", element(alg, v.residual)}});
	}
	return {{"triples_checked", r.triples_checked}, {"violation_count", r.violations.size()}, {"violations", list}};
}

inline json half_derivation(const AlgebraDef &alg, const HalfDerivationReport &r, std::size_t limit = 20)
{
	json list = json::array();
	for (std::size_t k = 0; k < r.failures.size() && k < limit; ++k)
	{
		auto &f = r.failures[k];
		list.push_back({{"pair", tuple(alg, {f.x, f.y})}, {"residual", element(alg, f.residual)}});
	}
	return {{"pairs_checked", r.pairs_checked}, {"failure_count", r.failures.size()}, {"failures", list}};
}

inline json solution_space(const AlgebraDef &alg, const SolutionSpace &s, const InteriorClassification &c)
{
	json fitted = json::array();
	for (auto &m : c.fitted)
		fitted.push_back(shift_map(alg, m));
	return {{"grade_shift", scalar(s.grade_shift)},
	        {"w_in", window(s.w_in)},
	        {"w_out", window(s.w_out)},
	        {"unknowns", s.system->unknowns.size()},
	        {"constraints", s.system->constraints.size()},
	        {"equations_skipped", s.system->equations_skipped},
	        {"dimension", s.dimension},
	        {"constraint_violations", verify_solution_space(s)},
	        {"core", window(c.core)},
	        {"restricted_dimension", c.restricted_dimension},
	        {"interior_dimension", c.interior_dimension},
	        {"non_shift_dimension", c.non_shift_dimension},
	        {"boundary_polluted", c.boundary_polluted()},
	        {"fitted", fitted}};
}

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
inline std::string emit(const json &doc) { return doc.dump(2) + "\n"; }

} // namespace witt::report
