#pragma once

// wittbench command-line front end. run() is the whole program; the tool's
// main() only forwards to it.

#include "witt/catalog.hpp"
#include "witt/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace witt::cli {

inline constexpr const char *tool_name = "wittbench";
inline constexpr const char *tool_version = "1.0.0";

/// Bad command-line input; exit code 2.
class UsageError : public Error
{
public:
	using Error::Error;
};

namespace detail {

inline std::string trim(std::string_view s)
{
	std::size_t b = 0, e = s.size();
	while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
		++b;
	while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
		--e;
	return std::string(s.substr(b, e - b));
}

inline Scalar scalar_arg(const std::string &text, const std::string &what)
{
	try
	{
		return parse_scalar(text);
	}
	catch (const Error &)
	{
		throw UsageError("malformed " + what + " '" + text + "'");
	}
}

inline long integer_arg(const std::string &text, const std::string &what)
{
	Scalar v = scalar_arg(text, what);
	if (!v.is_integer())
		throw UsageError(what + " must be an integer, got '" + text + "'");
	return v.to_long();
}

inline Scalar coefficient(std::string t)
{
	t = trim(t);
	if (t.size() >= 2 && t.front() == '(' && t.back() == ')')
		t = t.substr(1, t.size() - 2);
	return scalar_arg(t, "coefficient");
}

} // namespace detail

/**
 * Parses element text such as "2*L(1) + I(0)", "(1/2+i)*L(1/2,3) - Y(0)" or
 * the output of AlgebraDef::format. Indices are the stored ones.
 */
inline Element parse_element(const AlgebraDef &alg, std::string_view text)
{
	using detail::trim;
	std::vector<std::string> terms;
	std::string cur;
	int depth = 0;
	for (char c : text)
	{
		if (c == '(')
			++depth;
		else if (c == ')')
			--depth;
		if (depth < 0)
			throw UsageError("unbalanced ')' in element '" + std::string(text) + "'");
		std::string t = trim(cur);
		if (depth == 0 && (c == '+' || c == '-') && !t.empty() && t.back() == ')')
		{
			terms.push_back(t);
			cur = c == '-' ? "-" : "";
			continue;
		}
		cur += c;
	}
	if (depth != 0)
		throw UsageError("unbalanced '(' in element '" + std::string(text) + "'");
	if (!trim(cur).empty())
		terms.push_back(trim(cur));
	if (trim(text) == "0")
		return {};

	Element out;
	for (std::string t : terms)
	{
		Scalar coeff(1);
		while (!t.empty() && (t[0] == '-' || t[0] == '+' || std::isspace(static_cast<unsigned char>(t[0]))))
		{
			if (t[0] == '-')
				coeff = -coeff;
			t.erase(0, 1);
		}
		// split "coeff * F(args)" at the last top-level '*'
		std::size_t star = std::string::npos;
		int d = 0;
		for (std::size_t k = 0; k < t.size(); ++k)
		{
			if (t[k] == '(')
				++d;
			else if (t[k] == ')')
				--d;
			else if (t[k] == '*' && d == 0)
				star = k;
		}
		std::string body = t;
		if (star != std::string::npos)
		{
			coeff *= detail::coefficient(t.substr(0, star));
			body = trim(t.substr(star + 1));
		}
		auto open = body.find('(');
		if (open == std::string::npos || body.back() != ')')
			throw UsageError("malformed basis element '" + body + "'");
		std::string fam = trim(body.substr(0, open));
		int f = alg.family_id(fam);
		if (f < 0)
			throw UsageError("unknown family '" + fam + "' in element");
		std::string args = body.substr(open + 1, body.size() - open - 2);
		std::vector<std::string> parts;
		std::stringstream ss(args);
		for (std::string p; std::getline(ss, p, ',');)
			parts.push_back(trim(p));
		BasisIndex b{f, Scalar(), 0};
		if (alg.has_group())
		{
			if (parts.size() != 2)
				throw UsageError("basis element '" + body + "' needs (alpha, i)");
			b.alpha = detail::scalar_arg(parts[0], "group index");
			b.i = detail::integer_arg(parts[1], "index");
		}
		else
		{
			if (parts.size() != 1)
				throw UsageError("basis element '" + body + "' needs one index");
			b.i = detail::integer_arg(parts[0], "index");
		}
		alg.validate(b);
		out.add(b, coeff);
	}
	return out;
}

struct Options
{
	std::string alg, file, a, b, n;
	std::vector<std::string> gens;
	long imin = -3, imax = 3, gen_bound = 1, out_pad = 4;
	std::string out;
	std::string x, y, w;
	std::string shift = "0";
	std::string core_imin, core_imax;
	std::string family;
	std::vector<std::string> alphas, betas, gammas, seeds, terms;
	std::string kmin, kmax;
	std::string product = "plain-W";
	long shift_bound = 1, shift_imin = -1, shift_imax = 1;
};

namespace detail {

using json = report::json;

struct Loaded
{
	AlgebraDef alg;
	std::optional<CommProduct> product;
	json info;
};

inline Loaded load(const Options &o)
{
	if (o.alg.empty() == o.file.empty())
		throw UsageError("exactly one of --alg or --file is required");
	std::map<std::string, Scalar> values;
	if (!o.a.empty())
		values["a"] = scalar_arg(o.a, "--a");
	if (!o.b.empty())
		values["b"] = scalar_arg(o.b, "--b");
	if (!o.n.empty())
		values["n"] = scalar_arg(o.n, "--n");
	std::vector<Scalar> gens;
	for (auto &g : o.gens)
		gens.push_back(scalar_arg(g, "--gen"));

	Loaded l;
	if (!o.alg.empty())
	{
		CatalogParams p;
		p.values = values;
		p.generators = gens;
		try
		{
			l.alg = catalog(o.alg, p);
		}
		catch (const Error &e)
		{
			throw UsageError(e.what());
		}
		l.info = report::algebra(l.alg);
		l.info["source"] = "catalog";
	}
	else
	{
		std::ifstream in(o.file, std::ios::binary);
		if (!in)
			throw Error("cannot read '" + o.file + "'");
		std::stringstream ss;
		ss << in.rdbuf();
		std::optional<std::vector<Scalar>> gen_override;
		if (!gens.empty())
			gen_override = gens;
		ParsedAlgebra doc = parse_document(ss.str(), values, gen_override);
		l.alg = std::move(doc.algebra);
		l.product = std::move(doc.product);
		l.info = report::algebra(l.alg);
		l.info["source"] = "file";
		l.info["file"] = o.file;
	}
	return l;
}

inline Window window(const Options &o)
{
	Window w{o.gen_bound, o.imin, o.imax};
	try
	{
		w.validate();
	}
	catch (const Error &e)
	{
		throw UsageError(e.what());
	}
	return w;
}

/// "t=c" -> (t, c)
inline ShiftCoeffs shift_coeffs(const std::vector<std::string> &specs, const char *flag)
{
	ShiftCoeffs out;
	for (auto &s : specs)
	{
		auto eq = s.find('=');
		if (eq == std::string::npos)
			throw UsageError(std::string(flag) + " expects t=coeff, got '" + s + "'");
		out[integer_arg(trim(s.substr(0, eq)), flag)] += scalar_arg(trim(s.substr(eq + 1)), flag);
	}
	return out;
}

/// "d,m=c" -> ((d, m), c)
inline std::vector<std::tuple<Scalar, long, Scalar>> degree_seeds(const std::vector<std::string> &specs)
{
	std::vector<std::tuple<Scalar, long, Scalar>> out;
	for (auto &s : specs)
	{
		auto eq = s.find('=');
		auto comma = s.find(',');
		if (eq == std::string::npos || comma == std::string::npos || comma > eq)
			throw UsageError("--seed expects d,m=coeff, got '" + s + "'");
		out.emplace_back(scalar_arg(trim(s.substr(0, comma)), "--seed"),
		                 integer_arg(trim(s.substr(comma + 1, eq - comma - 1)), "--seed"),
		                 scalar_arg(trim(s.substr(eq + 1)), "--seed"));
	}
	return out;
}

/// "SRC,TGT,DALPHA,DI,COEFF"
inline ShiftMap term_map(const AlgebraDef &alg, const std::vector<std::string> &specs)
{
	ShiftMap m;
	for (auto &s : specs)
	{
		std::vector<std::string> p;
		std::stringstream ss(s);
		for (std::string x; std::getline(ss, x, ',');)
			p.push_back(trim(x));
		if (p.size() != 5)
			throw UsageError("--term expects SRC,TGT,DALPHA,DI,COEFF, got '" + s + "'");
		int src = alg.family_id(p[0]), tgt = alg.family_id(p[1]);
		if (src < 0 || tgt < 0)
			throw UsageError("--term names an unknown family: '" + s + "'");
		m.add({src, tgt, scalar_arg(p[2], "--term"), integer_arg(p[3], "--term"), scalar_arg(p[4], "--term")});
	}
	return m;
}

inline ShiftMap family_map(const AlgebraDef &alg, const Options &o)
{
	const std::string &f = o.family;
	auto param = [&](const char *k) {
		auto v = alg.parameter(k);
		if (!v)
			throw UsageError(std::string("family '") + f + "' needs parameter '" + k + "'");
		return *v;
	};
	if (f == "w_ab")
		return family_w_ab(param("a"), param("b"), shift_coeffs(o.alphas, "--alpha"), shift_coeffs(o.betas, "--beta"));
	if (f == "w_abs")
		return family_w_a_minus1_half(param("a"), shift_coeffs(o.alphas, "--alpha"), shift_coeffs(o.betas, "--beta"),
		                              shift_coeffs(o.gammas, "--gamma"));
	if (f == "wn")
	{
		DegreeShiftCoeffs seeds;
		for (auto &[d, m, c] : degree_seeds(o.seeds))
			seeds[{d, m}] += c;
		return family_wn(alg, seeds);
	}
	if (f == "hwn")
	{
		if (o.kmin.empty() || o.kmax.empty())
			throw UsageError("family 'hwn' needs --kmin and --kmax");
		std::vector<HwnSeed> seeds;
		for (auto &[d, m, c] : degree_seeds(o.seeds))
			seeds.push_back({d, m, c});
		return family_hwn(alg, seeds, {integer_arg(o.kmin, "--kmin"), integer_arg(o.kmax, "--kmax")});
	}
	throw UsageError("unknown family '" + f + "' (expected w_ab, w_abs, wn or hwn)");
}

struct Outcome
{
	json result;
	bool pass = true;
};

inline Outcome verb_alg_list()
{
	static const std::map<std::string, std::vector<std::string>> needs{
	    {"witt", {}}, {"w_ab", {"a", "b"}}, {"w_abs", {"a", "b"}}, {"wn_g", {"n", "gen"}}, {"hwn_g", {"n", "gen"}}};
	json list = json::array();
	for (auto &name : catalog_names())
		list.push_back({{"name", name}, {"requires", needs.at(name)}});
	return {{{"algebras", list}}, true};
}

inline Outcome verb_jacobi(const AlgebraDef &alg, const Window &w)
{
	auto r = check_jacobi(alg, w);
	return {report::jacobi(alg, r), r.ok()};
}

inline Outcome verb_bracket(const AlgebraDef &alg, const Options &o)
{
	if (o.x.empty() || o.y.empty())
		throw UsageError("bracket needs --x and --y");
	Element x = parse_element(alg, o.x), y = parse_element(alg, o.y);
	Element r = bracket(alg, x, y);
	return {{{"x", report::element(alg, x)},
	         {"y", report::element(alg, y)},
	         {"bracket", report::element(alg, r)},
	         {"text", alg.format(r)}},
	        true};
}

inline Outcome check_map(const AlgebraDef &alg, const ShiftMap &m, const Window &w)
{
	auto r = check_half_derivation(alg, m, window_pairs(alg, w));
	json j = report::half_derivation(alg, r);
	j["map"] = report::shift_map(alg, m);
	return {j, r.ok()};
}

inline Outcome verb_halfder_solve(const AlgebraDef &alg, const Options &o, const Window &w)
{
	Scalar d = scalar_arg(o.shift, "--shift");
	if (o.out_pad < 0)
		throw UsageError("--out-pad must be nonnegative");
	Window w_out = w.padded(o.out_pad, o.out_pad > 0 ? 1 : 0);
	SolutionSpace space = solve_half_derivations(alg, d, w, w_out);
	Window core = default_core(space);
	if (!o.core_imin.empty())
		core.i_min = integer_arg(o.core_imin, "--core-imin");
	if (!o.core_imax.empty())
		core.i_max = integer_arg(o.core_imax, "--core-imax");
	if (core.i_min > core.i_max)
		throw UsageError("core window is empty; widen --imin/--imax or pass --core-imin/--core-imax");
	InteriorClassification cls;
	try
	{
		cls = classify_interior(alg, space, core);
	}
	catch (const Error &e)
	{
		throw UsageError(e.what());
	}
	return {report::solution_space(alg, space, cls), true};
}

inline Outcome verb_tps_check(const AlgebraDef &alg, const std::optional<CommProduct> &file_product,
                              const Options &o, const Window &w)
{
	json j;
	TpsReport r;
	if (o.product == "plain-W")
		r = check_tps(plain_w(alg), alg, w);
	else if (o.product == "zero")
		r = check_tps(zero_product(alg), alg, w);
	else if (o.product == "file")
	{
		if (!file_product)
			throw UsageError("--product file needs a --file that declares product rules");
		r = check_tps(*file_product, alg, w);
	}
	else if (o.product == "mutation")
	{
		if (o.w.empty())
			throw UsageError("--product mutation needs --w");
		Element wel = parse_element(alg, o.w);
		j["w"] = report::element(alg, wel);
		r = check_tps(MutationProduct(plain_w(alg), wel), alg, w);
	}
	else
		throw UsageError("unknown --product '" + o.product + "' (expected plain-W, mutation, zero or file)");
	j["product"] = o.product;
	j["report"] = report::tps(alg, r);
	return {j, r.ok()};
}

inline Outcome verb_tps_solve(const AlgebraDef &alg, const Options &o, const Window &w)
{
	Window shifts{o.shift_bound, o.shift_imin, o.shift_imax};
	shifts.validate();
	auto basis = standard_family_basis(alg, shifts);
	TpsSolveResult res = solve_tps(alg, basis, w);
	json gens = json::array();
	for (auto &g : res.generators)
		gens.push_back({{"label", g.label}, {"map", report::shift_map(alg, g.map)}});
	json sols = json::array();
	for (auto &s : res.solutions)
	{
		json nz = json::array();
		for (std::size_t x = 0; x < s.coefficients.size(); ++x)
			for (std::size_t k = 0; k < s.coefficients[x].size(); ++k)
				if (!s.coefficients[x][k].is_zero())
					nz.push_back({{"generator", res.generators[k].label},
					              {"at", report::basis(alg, res.window_basis[x])},
					              {"coeff", report::scalar(s.coefficients[x][k])}});
		sols.push_back({{"trivial", s.trivial},
		                {"w", report::element(alg, s.w)},
		                {"coefficients", nz},
		                {"report", report::tps(alg, s.report)}});
	}
	return {{{"shift_window", report::window(shifts)},
	         {"generators", gens},
	         {"unknowns", res.unknowns},
	         {"constraints", res.constraints},
	         {"solution_dimension", res.solution_dimension},
	         {"rejected", res.rejected},
	         {"nontrivial_count", res.solutions.size() - 1},
	         {"solutions", sols}},
	        true};
}

inline Outcome verb_mutation(const AlgebraDef &alg, const Options &o)
{
	if (o.w.empty() || o.x.empty() || o.y.empty())
		throw UsageError("mutation needs --w, --x and --y");
	Element wel = parse_element(alg, o.w), x = parse_element(alg, o.x), y = parse_element(alg, o.y);
	MutationProduct m(plain_w(alg), wel);
	Element r = m.mul(x, y);
	return {{{"w", report::element(alg, wel)},
	         {"x", report::element(alg, x)},
	         {"y", report::element(alg, y)},
	         {"product", report::element(alg, r)},
	         {"text", alg.format(r)}},
	        true};
}

} // namespace detail

/// Runs one command. Exit codes: 0 pass, 1 a checked property failed, 2 usage/parse/IO error.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr)
{
	using detail::json;
	Options o;
	CLI::App app{"Exact checks and solvers for Witt-type Lie algebras", tool_name};
	app.require_subcommand(1);
	app.set_version_flag("--version", tool_version);

	auto algebra_opts = [&](CLI::App *s) {
		s->add_option("--alg", o.alg, "catalog algebra (witt, w_ab, w_abs, wn_g, hwn_g)");
		s->add_option("--file", o.file, ".liealg source file");
		s->add_option("--a", o.a, "parameter a");
		s->add_option("--b", o.b, "parameter b");
		s->add_option("--n", o.n, "parameter n");
		s->add_option("--gen", o.gens, "group generator (repeatable)");
		s->add_option("--out", o.out, "write the report to this path");
	};
	auto window_opts = [&](CLI::App *s) {
		s->add_option("--imin", o.imin, "smallest index of the window");
		s->add_option("--imax", o.imax, "largest index of the window");
		s->add_option("--gen-bound", o.gen_bound, "bound on group coordinates");
	};
	auto family_opts = [&](CLI::App *s) {
		s->add_option("--alpha", o.alphas, "t=coeff");
		s->add_option("--beta", o.betas, "t=coeff");
		s->add_option("--gamma", o.gammas, "t=coeff");
		s->add_option("--seed", o.seeds, "d,m=coeff");
		s->add_option("--kmin", o.kmin, "smallest index shift kept (hwn)");
		s->add_option("--kmax", o.kmax, "largest index shift kept (hwn)");
	};

	auto *list = app.add_subcommand("alg-list", "list catalog algebras");
	list->add_option("--out", o.out, "write the report to this path");
	auto *show = app.add_subcommand("alg-show", "describe an algebra and print its .liealg source");
	algebra_opts(show);
	auto *parse_cmd = app.add_subcommand("alg-parse", "parse a .liealg file");
	algebra_opts(parse_cmd);
	auto *br = app.add_subcommand("bracket", "bracket of two elements");
	algebra_opts(br);
	br->add_option("--x", o.x, "left element, e.g. \"2*L(1) + I(0)\"");
	br->add_option("--y", o.y, "right element");
	auto *jac = app.add_subcommand("jacobi", "check the Jacobi identity on a window");
	algebra_opts(jac);
	window_opts(jac);
	auto *hcheck = app.add_subcommand("halfder-check", "check a shift map given by --term");
	algebra_opts(hcheck);
	window_opts(hcheck);
	hcheck->add_option("--term", o.terms, "SRC,TGT,DALPHA,DI,COEFF (repeatable)");
	auto *hfam = app.add_subcommand("halfder-family", "build and check a closed-form family");
	algebra_opts(hfam);
	window_opts(hfam);
	hfam->add_option("--family", o.family, "w_ab, w_abs, wn or hwn")->required();
	family_opts(hfam);
	auto *hsolve = app.add_subcommand("halfder-solve", "solve for 1/2-derivations of one grade shift");
	algebra_opts(hsolve);
	window_opts(hsolve);
	hsolve->add_option("--shift", o.shift, "grade shift");
	hsolve->add_option("--out-pad", o.out_pad, "index slack of the output window");
	hsolve->add_option("--core-imin", o.core_imin, "core window lower index");
	hsolve->add_option("--core-imax", o.core_imax, "core window upper index");
	auto *tcheck = app.add_subcommand("tps-check", "check a product for the transposed Poisson identities");
	algebra_opts(tcheck);
	window_opts(tcheck);
	tcheck->add_option("--product", o.product, "plain-W, mutation, zero or file");
	tcheck->add_option("--w", o.w, "mutation element");
	auto *tsolve = app.add_subcommand("tps-solve", "solve for transposed Poisson structures on a window");
	algebra_opts(tsolve);
	window_opts(tsolve);
	tsolve->add_option("--shift-bound", o.shift_bound, "group bound of family shifts");
	tsolve->add_option("--shift-imin", o.shift_imin, "smallest index shift of the family basis");
	tsolve->add_option("--shift-imax", o.shift_imax, "largest index shift of the family basis");
	auto *mut = app.add_subcommand("mutation", "evaluate x o y = (x.w).y over the plain W product");
	algebra_opts(mut);
	mut->add_option("--w", o.w, "mutation element");
	mut->add_option("--x", o.x, "left element");
	mut->add_option("--y", o.y, "right element");

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError &e)
	{
		int code = app.exit(e, out, err);
		return code == 0 ? 0 : 2;
	}

	CLI::App *sub = app.get_subcommands().front();
	const std::string verb = sub->get_name();
	try
	{
		json doc{{"tool", {{"name", tool_name}, {"version", tool_version}}}, {"verb", verb}};
		detail::Outcome res;
		if (verb == "alg-list")
			res = detail::verb_alg_list();
		else
		{
			if (verb == "alg-parse" && o.file.empty())
				throw UsageError("alg-parse needs --file");
			detail::Loaded l = detail::load(o);
			const AlgebraDef &alg = l.alg;
			doc["algebra"] = l.info;
			Window w = detail::window(o);
			auto windowed = [&] { doc["window"] = report::window(w); };
			if (verb == "alg-show" || verb == "alg-parse")
			{
				std::vector<Rule> rules = alg.rules();
				res.result = {{"families", alg.families().size()},
				              {"rules", rules.size()},
				              {"has_product", l.product.has_value()},
				              {"source", render(alg, l.product ? &*l.product : nullptr)}};
			}
			else if (verb == "bracket")
				res = detail::verb_bracket(alg, o);
			else if (verb == "jacobi")
			{
				windowed();
				res = detail::verb_jacobi(alg, w);
			}
			else if (verb == "halfder-check")
			{
				windowed();
				if (o.terms.empty())
					throw UsageError("halfder-check needs at least one --term");
				res = detail::check_map(alg, detail::term_map(alg, o.terms), w);
			}
			else if (verb == "halfder-family")
			{
				windowed();
				res = detail::check_map(alg, detail::family_map(alg, o), w);
				res.result["family"] = o.family;
			}
			else if (verb == "halfder-solve")
			{
				windowed();
				res = detail::verb_halfder_solve(alg, o, w);
			}
			else if (verb == "tps-check")
			{
				windowed();
				res = detail::verb_tps_check(alg, l.product, o, w);
			}
			else if (verb == "tps-solve")
			{
				windowed();
				res = detail::verb_tps_solve(alg, o, w);
			}
			else if (verb == "mutation")
				res = detail::verb_mutation(alg, o);
		}
		doc["result"] = res.result;
		doc["status"] = res.pass ? "pass" : "fail";
		std::string text = report::emit(doc);
		if (o.out.empty())
			out << text;
		else
		{
			std::ofstream f(o.out, std::ios::binary);
			if (!(f << text))
			{
				err << tool_name << ": cannot write '" << o.out << "'\n";
				return 2;
			}
		}
		return res.pass ? 0 : 1;
	}
	catch (const std::exception &e)
	{
		err << tool_name << ": " << e.what() << "\n";
		return 2;
	}
}

} // namespace witt::cli
