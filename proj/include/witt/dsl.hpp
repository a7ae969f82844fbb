#pragma once

// .liealg text format: parser and renderer. The grammar is documented in
// docs/liealg-grammar.md.

#include "witt/tps.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace witt {

struct SourceSpan
{
	int line = 1;
	int column = 1;
	int length = 0;
};

class ParseError : public Error
{
public:
	enum class Kind
	{
		lex,
		syntax,
		semantic
	};

	ParseError(SourceSpan span, Kind kind, const std::string &message)
	    : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + kind_name(kind) + " error: " +
	            message),
	      span_(span), kind_(kind), message_(message)
	{
	}

	const SourceSpan &span() const { return span_; }
	Kind kind() const { return kind_; }
	const std::string &message() const { return message_; }

	static const char *kind_name(Kind k)
	{
		switch (k)
		{
		case Kind::lex:
			return "lex";
		case Kind::syntax:
			return "syntax";
		default:
			return "semantic";
		}
	}

private:
	SourceSpan span_;
	Kind kind_;
	std::string message_;
};

/// Result of parsing a .liealg document.
struct ParsedAlgebra
{
	AlgebraDef algebra;
	std::optional<CommProduct> product; ///< present when the document declares product rules
};

namespace dsl {

enum class Tok
{
	ident,
	number,
	imag,
	lparen,
	rparen,
	lbracket,
	rbracket,
	lbrace,
	rbrace,
	comma,
	semicolon,
	equals,
	plus,
	minus,
	star,
	slash,
	eof
};

struct Token
{
	Tok kind = Tok::eof;
	std::string text;
	SourceSpan span;
};

inline const char *describe(Tok t)
{
	switch (t)
	{
	case Tok::ident:
		return "identifier";
	case Tok::number:
		return "number";
	case Tok::imag:
		return "imaginary literal";
	case Tok::lparen:
		return "'('";
	case Tok::rparen:
		return "')'";
	case Tok::lbracket:
		return "'['";
	case Tok::rbracket:
		return "']'";
	case Tok::lbrace:
		return "'{'";
	case Tok::rbrace:
		return "'}'";
	case Tok::comma:
		return "','";
	case Tok::semicolon:
		return "';'";
	case Tok::equals:
		return "'='";
	case Tok::plus:
		return "'+'";
	case Tok::minus:
		return "'-'";
	case Tok::star:
		return "'*'";
	case Tok::slash:
		return "'/'";
	default:
		return "end of input";
	}
}

/// On-demand tokenizer, so errors surface in document order.
class Lexer
{
public:
	explicit Lexer(std::string_view text) : text_(text) { advance(); }

	const Token &peek() const { return current_; }
	Token next()
	{
		Token t = current_;
		advance();
		return t;
	}

private:
	static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
	static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

	void bump()
	{
		if (text_[pos_] == '\n')
		{
			++line_;
			col_ = 1;
		}
		else
			++col_;
		++pos_;
	}

	void advance()
	{
		while (pos_ < text_.size())
		{
			char c = text_[pos_];
			if (c == '#')
				while (pos_ < text_.size() && text_[pos_] != '\n')
					bump();
			else if (std::isspace(static_cast<unsigned char>(c)))
				bump();
			else
				break;
		}
		Token t;
		t.span = {line_, col_, 0};
		if (pos_ >= text_.size())
		{
			current_ = t;
			return;
		}
		std::size_t start = pos_;
		char c = text_[pos_];
		if (ident_start(c))
		{
			while (pos_ < text_.size() && ident_char(text_[pos_]))
				bump();
			t.kind = Tok::ident;
		}
		else if (std::isdigit(static_cast<unsigned char>(c)))
		{
			while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
				bump();
			t.kind = Tok::number;
			if (pos_ < text_.size() && text_[pos_] == 'i' && (pos_ + 1 >= text_.size() || !ident_char(text_[pos_ + 1])))
			{
				bump();
				t.kind = Tok::imag;
			}
			else if (pos_ < text_.size() && ident_char(text_[pos_]))
			{
				t.span.length = static_cast<int>(pos_ - start + 1);
				throw ParseError(t.span, ParseError::Kind::lex, "malformed number");
			}
		}
		else
		{
			static const std::string_view punct = "()[]{},;=+-*/";
			static const Tok kinds[] = {Tok::lparen, Tok::rparen, Tok::lbracket, Tok::rbracket, Tok::lbrace,
			                            Tok::rbrace, Tok::comma,  Tok::semicolon, Tok::equals,   Tok::plus,
			                            Tok::minus,  Tok::star,   Tok::slash};
			auto p = punct.find(c);
			if (p == std::string_view::npos)
			{
				t.span.length = 1;
				std::string shown = static_cast<unsigned char>(c) < 0x80 ? std::string(1, c) : std::string("non-ASCII byte");
				throw ParseError(t.span, ParseError::Kind::lex, "unexpected character '" + shown + "'");
			}
			bump();
			t.kind = kinds[p];
		}
		t.text = std::string(text_.substr(start, pos_ - start));
		t.span.length = static_cast<int>(pos_ - start);
		current_ = std::move(t);
	}

	std::string_view text_;
	std::size_t pos_ = 0;
	int line_ = 1;
	int col_ = 1;
	Token current_;
};

struct Node
{
	enum class Kind
	{
		number,
		imag,
		ident,
		call,
		neg,
		add,
		sub,
		mul,
		div
	} kind;
	SourceSpan span;
	std::string text;
	std::vector<std::unique_ptr<Node>> kids;
};
using NodePtr = std::unique_ptr<Node>;

/// Family reference on a rule head: F(var) or F(alpha_var, index_var).
struct Head
{
	Token family;
	std::vector<Token> vars;
};

/// Value of a rule right-hand side: a constant polynomial part plus basis terms.
struct TermKey
{
	int target;
	Scalar alpha_offset;
	long constant;
	std::map<std::string, long> params;
	auto operator<=>(const TermKey &) const = default;
};

struct Value
{
	Poly constant;
	std::map<TermKey, Poly> terms;
	bool has_terms() const { return !terms.empty(); }
};

class Parser
{
public:
	Parser(std::string_view text, const std::map<std::string, Scalar> &overrides,
	       const std::optional<std::vector<Scalar>> &generators)
	    : lex_(text), overrides_(overrides), gen_override_(generators)
	{
	}

	ParsedAlgebra parse()
	{
		expect_keyword("algebra");
		Token name = expect(Tok::ident, "algebra name");
		name_ = name.text;
		expect(Tok::lparen);
		if (lex_.peek().kind != Tok::rparen)
		{
			parse_param();
			while (accept(Tok::comma))
				parse_param();
		}
		expect(Tok::rparen);
		for (auto &[k, v] : overrides_)
			if (!param_index(k))
				throw ParseError(name.span, ParseError::Kind::semantic,
				                 "override for undeclared parameter '" + k + "'");
		if (gen_override_)
			generators_ = *gen_override_;
		expect(Tok::lbrace);
		while (lex_.peek().kind != Tok::rbrace)
		{
			Token kw = lex_.peek();
			if (kw.kind != Tok::ident)
				syntax(kw, "expected a declaration ('group', 'family', 'bracket' or 'product')");
			if (kw.text == "group")
				parse_group();
			else if (kw.text == "family")
				parse_family();
			else if (kw.text == "bracket" || kw.text == "product")
				parse_rule(kw.text == "product");
			else
				syntax(kw, "unknown declaration '" + kw.text + "'");
		}
		Token close = expect(Tok::rbrace);
		if (lex_.peek().kind != Tok::eof)
			syntax(lex_.peek(), "unexpected input after the closing '}'");
		if (families_.empty())
			throw ParseError(close.span, ParseError::Kind::semantic, "algebra declares no families");
		ParsedAlgebra out{build(close.span), std::nullopt};
		if (!product_rules_.empty())
			out.product = CommProduct(out.algebra, product_rules_, "product");
		return out;
	}

private:
	// --- token helpers

	[[noreturn]] void syntax(const Token &t, const std::string &msg)
	{
		throw ParseError(t.span, ParseError::Kind::syntax, msg);
	}
	[[noreturn]] static void semantic(const SourceSpan &s, const std::string &msg)
	{
		throw ParseError(s, ParseError::Kind::semantic, msg);
	}

	Token expect(Tok k, const char *what = nullptr)
	{
		if (lex_.peek().kind != k)
			syntax(lex_.peek(), std::string("expected ") + (what ? what : describe(k)) + ", found " +
			                        (lex_.peek().kind == Tok::eof ? "end of input" : "'" + lex_.peek().text + "'"));
		return lex_.next();
	}
	bool accept(Tok k)
	{
		if (lex_.peek().kind != k)
			return false;
		lex_.next();
		return true;
	}
	Token expect_keyword(const char *kw)
	{
		if (lex_.peek().kind != Tok::ident || lex_.peek().text != kw)
			syntax(lex_.peek(), std::string("expected '") + kw + "'");
		return lex_.next();
	}

	// --- expressions

	NodePtr leaf(Node::Kind k, const Token &t)
	{
		auto n = std::make_unique<Node>();
		n->kind = k;
		n->span = t.span;
		n->text = t.text;
		return n;
	}
	NodePtr binary(Node::Kind k, NodePtr l, NodePtr r, const SourceSpan &s)
	{
		auto n = std::make_unique<Node>();
		n->kind = k;
		n->span = s;
		n->kids.push_back(std::move(l));
		n->kids.push_back(std::move(r));
		return n;
	}

	NodePtr expr()
	{
		NodePtr left = term();
		while (lex_.peek().kind == Tok::plus || lex_.peek().kind == Tok::minus)
		{
			Token op = lex_.next();
			left = binary(op.kind == Tok::plus ? Node::Kind::add : Node::Kind::sub, std::move(left), term(), op.span);
		}
		return left;
	}
	NodePtr term()
	{
		NodePtr left = factor();
		while (lex_.peek().kind == Tok::star || lex_.peek().kind == Tok::slash)
		{
			Token op = lex_.next();
			left = binary(op.kind == Tok::star ? Node::Kind::mul : Node::Kind::div, std::move(left), factor(), op.span);
		}
		return left;
	}
	NodePtr factor()
	{
		const Token &t = lex_.peek();
		switch (t.kind)
		{
		case Tok::minus:
		case Tok::plus: {
			Token op = lex_.next();
			NodePtr inner = factor();
			if (op.kind == Tok::plus)
				return inner;
			auto n = std::make_unique<Node>();
			n->kind = Node::Kind::neg;
			n->span = op.span;
			n->kids.push_back(std::move(inner));
			return n;
		}
		case Tok::number:
			return leaf(Node::Kind::number, lex_.next());
		case Tok::imag:
			return leaf(Node::Kind::imag, lex_.next());
		case Tok::ident: {
			Token id = lex_.next();
			if (lex_.peek().kind != Tok::lparen)
				return leaf(Node::Kind::ident, id);
			lex_.next();
			NodePtr call = leaf(Node::Kind::call, id);
			call->kids.push_back(expr());
			while (accept(Tok::comma))
				call->kids.push_back(expr());
			expect(Tok::rparen);
			return call;
		}
		case Tok::lparen: {
			lex_.next();
			NodePtr inner = expr();
			expect(Tok::rparen);
			return inner;
		}
		default:
			syntax(t, std::string("expected an expression, found ") +
			              (t.kind == Tok::eof ? "end of input" : "'" + t.text + "'"));
		}
	}

	// --- semantic evaluation

	std::optional<int> param_index(const std::string &name) const
	{
		for (std::size_t k = 0; k < params_.size(); ++k)
			if (params_[k].first == name)
				return static_cast<int>(k);
		return std::nullopt;
	}

	/// Evaluates to a polynomial; `vars` maps identifiers to variable indices. Family calls are rejected.
	Poly eval_poly(const Node &n, const std::map<std::string, int> &vars)
	{
		Value v = eval(n, vars, false);
		return v.constant;
	}

	Scalar eval_constant(const Node &n, const std::map<std::string, int> &vars = {})
	{
		Poly p = eval_poly(n, vars);
		if (!p.is_constant())
			semantic(n.span, "expected a constant expression");
		return p.constant_term();
	}

	Value eval(const Node &n, const std::map<std::string, int> &vars, bool allow_calls)
	{
		Value v;
		switch (n.kind)
		{
		case Node::Kind::number:
			v.constant = Poly(Scalar(Integer(n.text)));
			return v;
		case Node::Kind::imag:
			v.constant = Poly(Scalar(Rational(0), Rational(Integer(n.text.substr(0, n.text.size() - 1)))));
			return v;
		case Node::Kind::ident: {
			if (auto it = vars.find(n.text); it != vars.end())
			{
				v.constant = Poly::var(it->second);
				return v;
			}
			if (auto k = param_index(n.text))
			{
				v.constant = Poly::var(poly_var::first_param + *k);
				return v;
			}
			if (family_index(n.text) >= 0)
				semantic(n.span, "family '" + n.text + "' used without indices");
			semantic(n.span, "unknown identifier '" + n.text + "'");
		}
		case Node::Kind::call: {
			int fam = family_index(n.text);
			if (fam < 0)
				semantic(n.span, "undeclared family '" + n.text + "'");
			if (!allow_calls)
				semantic(n.span, "basis element '" + n.text + "(...)' is not allowed here");
			v.terms.emplace(call_key(n, fam, vars), Poly(1));
			return v;
		}
		case Node::Kind::neg: {
			v = eval(*n.kids[0], vars, allow_calls);
			v.constant = -v.constant;
			for (auto &[k, p] : v.terms)
				p = -p;
			return v;
		}
		case Node::Kind::add:
		case Node::Kind::sub: {
			v = eval(*n.kids[0], vars, allow_calls);
			Value r = eval(*n.kids[1], vars, allow_calls);
			bool sub = n.kind == Node::Kind::sub;
			v.constant = sub ? v.constant - r.constant : v.constant + r.constant;
			for (auto &[k, p] : r.terms)
			{
				Poly &dst = v.terms[k];
				dst = sub ? dst - p : dst + p;
				if (dst.is_zero())
					v.terms.erase(k);
			}
			return v;
		}
		case Node::Kind::mul: {
			Value l = eval(*n.kids[0], vars, allow_calls);
			Value r = eval(*n.kids[1], vars, allow_calls);
			if (l.has_terms() && r.has_terms())
				semantic(n.span, "product of two basis elements");
			v.constant = l.constant * r.constant;
			auto scale = [&](const Value &with_terms, const Poly &by) {
				for (auto &[k, p] : with_terms.terms)
				{
					Poly q = p * by;
					if (!q.is_zero())
						v.terms[k] = v.terms[k] + q;
				}
			};
			scale(l, r.constant);
			scale(r, l.constant);
			return v;
		}
		case Node::Kind::div: {
			v = eval(*n.kids[0], vars, allow_calls);
			Value r = eval(*n.kids[1], vars, allow_calls);
			if (r.has_terms() || !r.constant.is_constant())
				semantic(n.kids[1]->span, "division by a non-constant");
			Scalar d = r.constant.constant_term();
			if (d.is_zero())
				semantic(n.kids[1]->span, "division by zero");
			Poly inv(d.inverse());
			v.constant = v.constant * inv;
			for (auto &[k, p] : v.terms)
				p = p * inv;
			return v;
		}
		}
		semantic(n.span, "unsupported expression");
	}

	int family_index(const std::string &name) const
	{
		for (std::size_t k = 0; k < families_.size(); ++k)
			if (families_[k].name == name)
				return static_cast<int>(k);
		return -1;
	}

	/// Target of a basis term: index args must be (left var + right var + shift).
	TermKey call_key(const Node &n, int fam, const std::map<std::string, int> &vars)
	{
		const bool group = !generators_.empty();
		const std::size_t want = group ? 2 : 1;
		if (n.kids.size() != want)
			semantic(n.span, "family '" + n.text + "' takes " + std::to_string(want) + " index argument" +
			                     (want == 1 ? "" : "s"));
		TermKey key{fam, Scalar(), 0, {}};
		auto check_heads = [&](const Poly &p, int lv, int rv, const Node &arg, const char *what) {
			for (auto &[m, c] : p.terms())
			{
				int deg = 0;
				for (int e : m)
					deg += e;
				if (deg > 1)
					semantic(arg.span, std::string(what) + " argument must be affine");
			}
			if (p.linear_coeff(lv) != Scalar(1) || p.linear_coeff(rv) != Scalar(1))
				semantic(arg.span, std::string(what) + " argument must contain both head " + what +
				                       " variables with coefficient 1");
		};
		if (group)
		{
			const Node &arg = *n.kids[0];
			Poly p = eval_poly(arg, vars);
			check_heads(p, poly_var::alpha_left, poly_var::alpha_right, arg, "group");
			for (int v = poly_var::i_left; v < poly_var::first_param + static_cast<int>(params_.size()); ++v)
				if (p.uses_var(v))
					semantic(arg.span, "group argument may only use the head group variables and constants");
			key.alpha_offset = p.constant_term();
		}
		const Node &arg = *n.kids[group ? 1 : 0];
		Poly p = eval_poly(arg, vars);
		check_heads(p, poly_var::i_left, poly_var::i_right, arg, "index");
		if (p.uses_var(poly_var::alpha_left) || p.uses_var(poly_var::alpha_right))
			semantic(arg.span, "index argument may not use group variables");
		Scalar c = p.constant_term();
		if (!c.is_integer())
			semantic(arg.span, "index shift must be an integer");
		key.constant = c.to_long();
		for (std::size_t k = 0; k < params_.size(); ++k)
		{
			int var = poly_var::first_param + static_cast<int>(k);
			if (!p.uses_var(var))
				continue;
			Scalar mult = p.linear_coeff(var);
			if (!mult.is_integer())
				semantic(arg.span, "parameter multiples in an index must be integers");
			key.params[params_[k].first] = mult.to_long();
		}
		return key;
	}

	// --- declarations

	void parse_param()
	{
		Token name = expect(Tok::ident, "parameter name");
		expect(Tok::equals);
		NodePtr e = expr();
		if (param_index(name.text))
			semantic(name.span, "parameter '" + name.text + "' declared twice");
		Scalar v = eval_constant(*e);
		if (auto it = overrides_.find(name.text); it != overrides_.end())
			v = it->second;
		params_.emplace_back(name.text, v);
	}

	void parse_group()
	{
		Token kw = lex_.next();
		std::vector<NodePtr> gens;
		gens.push_back(expr());
		while (accept(Tok::comma))
			gens.push_back(expr());
		expect(Tok::semicolon);
		if (!families_.empty())
			semantic(kw.span, "'group' must precede all family declarations");
		if (group_seen_)
			semantic(kw.span, "'group' declared twice");
		group_seen_ = true;
		std::vector<Scalar> values;
		for (auto &g : gens)
		{
			Scalar v = eval_constant(*g);
			if (v.is_zero())
				semantic(g->span, "group generators must be nonzero");
			values.push_back(v);
		}
		if (!gen_override_)
			generators_ = std::move(values);
	}

	void parse_family()
	{
		lex_.next();
		Token name = expect(Tok::ident, "family name");
		expect(Tok::lparen);
		std::vector<Token> vars{expect(Tok::ident, "index variable")};
		while (accept(Tok::comma))
			vars.push_back(expect(Tok::ident, "index variable"));
		expect(Tok::rparen);
		NodePtr offset;
		if (lex_.peek().kind == Tok::ident && lex_.peek().text == "offset")
		{
			lex_.next();
			offset = expr();
		}
		Token gkw = expect_keyword("grade");
		NodePtr grade = expr();
		expect(Tok::semicolon);

		if (family_index(name.text) >= 0)
			semantic(name.span, "family '" + name.text + "' declared twice");
		if (param_index(name.text))
			semantic(name.span, "family name '" + name.text + "' clashes with a parameter");
		const bool group = !generators_.empty();
		if (vars.size() != (group ? 2u : 1u))
			semantic(name.span, group ? "families of a graded group algebra take (group, index) variables"
			                          : "families take one index variable (declare 'group' for two)");
		std::map<std::string, int> scope;
		for (std::size_t k = 0; k < vars.size(); ++k)
		{
			if (param_index(vars[k].text))
				semantic(vars[k].span, "variable '" + vars[k].text + "' shadows a parameter");
			if (!scope.emplace(vars[k].text, group && k == 0 ? poly_var::alpha_left : poly_var::i_left).second)
				semantic(vars[k].span, "variable '" + vars[k].text + "' used twice");
		}
		Rational off(0);
		if (offset)
		{
			Scalar o = eval_constant(*offset);
			if (!o.is_real())
				semantic(offset->span, "offset must be rational");
			off = o.re();
		}
		Poly g = eval_poly(*grade, scope);
		if (g.degree() > 1)
			semantic(grade->span, "grade must be affine in the index variables");
		for (std::size_t k = poly_var::first_param; k < poly_var::first_param + params_.size(); ++k)
			if (g.uses_var(static_cast<int>(k)))
				semantic(grade->span, "grade may not depend on parameters");
		Scalar u = g.linear_coeff(poly_var::alpha_left);
		Scalar v = g.linear_coeff(poly_var::i_left);
		if (g.constant_term() != v * Scalar(off))
			semantic(grade->span, "grade constant must equal the index coefficient times the offset");
		(void)gkw;
		families_.push_back({name.text, off, u, v});
	}

	void parse_rule(bool product)
	{
		Token kw = lex_.next();
		expect(Tok::lbracket);
		Head left = parse_head();
		expect(Tok::comma);
		Head right = parse_head();
		expect(Tok::rbracket);
		expect(Tok::equals);
		NodePtr rhs = expr();
		expect(Tok::semicolon);

		if (families_.empty())
			semantic(kw.span, "rules must follow the family declarations");
		const bool group = !generators_.empty();
		std::map<std::string, int> scope;
		auto bind = [&](const Head &h, bool is_left) {
			int fam = family_index(h.family.text);
			if (fam < 0)
				semantic(h.family.span, "undeclared family '" + h.family.text + "'");
			if (h.vars.size() != (group ? 2u : 1u))
				semantic(h.family.span, "family '" + h.family.text + "' takes " + (group ? "2" : "1") +
				                            " index variable" + (group ? "s" : ""));
			for (std::size_t k = 0; k < h.vars.size(); ++k)
			{
				const Token &t = h.vars[k];
				if (param_index(t.text) || family_index(t.text) >= 0)
					semantic(t.span, "variable '" + t.text + "' shadows a declared name");
				int var = group && k == 0 ? (is_left ? poly_var::alpha_left : poly_var::alpha_right)
				                          : (is_left ? poly_var::i_left : poly_var::i_right);
				if (!scope.emplace(t.text, var).second)
					semantic(t.span, "variable '" + t.text + "' used twice");
			}
			return fam;
		};
		int lf = bind(left, true);
		int rf = bind(right, false);
		Value v = eval(*rhs, scope, true);
		if (!v.constant.is_zero())
			semantic(rhs->span, "right-hand side has a term without a basis element");
		Rule rule{lf, rf, {}};
		for (auto &[k, p] : v.terms)
			rule.terms.push_back({k.target, k.alpha_offset, IndexShift{k.constant, k.params}, p});

		// validate now so errors point at this declaration
		try
		{
			if (product)
			{
				product_rules_.push_back(rule);
				AlgebraDef probe = build_unchecked();
				CommProduct(probe, product_rules_);
			}
			else
			{
				rules_.push_back(rule);
				build_unchecked();
			}
		}
		catch (const Error &e)
		{
			semantic(kw.span, e.what());
		}
	}

	Head parse_head()
	{
		Head h;
		h.family = expect(Tok::ident, "family name");
		expect(Tok::lparen);
		h.vars.push_back(expect(Tok::ident, "index variable"));
		while (accept(Tok::comma))
			h.vars.push_back(expect(Tok::ident, "index variable"));
		expect(Tok::rparen);
		return h;
	}

	AlgebraDef build_unchecked() const { return AlgebraDef(name_, params_, generators_, families_, rules_); }

	AlgebraDef build(const SourceSpan &at) const
	{
		try
		{
			return build_unchecked();
		}
		catch (const Error &e)
		{
			semantic(at, e.what());
		}
	}

	Lexer lex_;
	std::map<std::string, Scalar> overrides_;
	std::optional<std::vector<Scalar>> gen_override_;
	std::string name_;
	Parameters params_;
	std::vector<Scalar> generators_;
	bool group_seen_ = false;
	std::vector<FamilyDecl> families_;
	std::vector<Rule> rules_;
	std::vector<Rule> product_rules_;
};

inline std::vector<std::string> pick_names(const std::vector<std::string> &pool, std::size_t count,
                                           const std::set<std::string> &taken)
{
	std::vector<std::string> out;
	for (const auto &s : pool)
		if (!taken.contains(s) && out.size() < count)
			out.push_back(s);
	for (int k = 0; out.size() < count; ++k)
		if (std::string s = "v" + std::to_string(k); !taken.contains(s))
			out.push_back(s);
	return out;
}

inline std::string shift_text(const IndexShift &s)
{
	std::string out;
	for (auto &[name, mult] : s.params)
	{
		if (mult == 0)
			continue;
		out += mult < 0 ? " - " : " + ";
		long a = mult < 0 ? -mult : mult;
		out += (a == 1 ? "" : std::to_string(a) + "*") + name;
	}
	if (s.constant != 0)
		out += (s.constant < 0 ? " - " : " + ") + std::to_string(s.constant < 0 ? -s.constant : s.constant);
	return out;
}

inline std::string scalar_offset_text(const Scalar &c)
{
	if (c.is_zero())
		return "";
	if (c.is_real() && sgn(c.re()) < 0)
		return " - " + Poly::literal(-c);
	return " + " + Poly::literal(c);
}

} // namespace dsl

/**
 * Parses a .liealg document. `overrides` replaces declared parameter values and
 * `generators` replaces the declared group; both must be consistent with the text.
 */
inline ParsedAlgebra parse_document(std::string_view text, const std::map<std::string, Scalar> &overrides = {},
                                    const std::optional<std::vector<Scalar>> &generators = std::nullopt)
{
	return dsl::Parser(text, overrides, generators).parse();
}

inline AlgebraDef parse(std::string_view text) { return parse_document(text).algebra; }

/// .liealg source for an algebra (and optionally a product on it); parse(render(a)) is bracket-equivalent to a.
inline std::string render(const AlgebraDef &alg, const CommProduct *product = nullptr)
{
	using namespace dsl;
	std::set<std::string> taken;
	for (auto &[k, v] : alg.parameters())
		taken.insert(k);
	for (auto &f : alg.families())
		taken.insert(f.name);
	const bool group = alg.has_group();
	auto idx = pick_names({"m", "n", "p", "q", "r", "s"}, 2, taken);
	auto grp = pick_names({"x", "y", "u", "v", "g", "h"}, 2, taken);

	std::vector<std::string> names{grp[0], grp[1], idx[0], idx[1]};
	for (auto &[k, v] : alg.parameters())
		names.push_back(k);

	std::ostringstream os;
	os << "algebra " << alg.name() << "(";
	bool first = true;
	for (auto &[k, v] : alg.parameters())
	{
		os << (first ? "" : ", ") << k << " = " << Poly(v).to_string(names);
		first = false;
	}
	os << ") {\n";
	if (group)
	{
		os << "  group ";
		for (std::size_t k = 0; k < alg.generators().size(); ++k)
			os << (k ? ", " : "") << Poly(alg.generators()[k]).to_string(names);
		os << ";\n";
	}
	for (auto &f : alg.families())
	{
		os << "  family " << f.name << "(" << (group ? grp[0] + ", " : "") << idx[0] << ")";
		if (f.index_offset != 0)
			os << " offset " << Poly::literal(Scalar(f.index_offset));
		Poly g = Poly(f.grade_index) * (Poly::var(poly_var::i_left) + Poly(Scalar(f.index_offset)));
		if (group)
			g += Poly(f.grade_alpha) * Poly::var(poly_var::alpha_left);
		os << " grade " << g.to_string(names) << ";\n";
	}
	auto head = [&](int fam, int side) {
		std::string s = alg.families()[fam].name + "(";
		if (group)
			s += grp[side] + ", ";
		return s + idx[side] + ")";
	};
	auto rules_text = [&](const std::vector<Rule> &rules, const char *kw) {
		for (const Rule &r : rules)
		{
			os << "  " << kw << " [" << head(r.left, 0) << ", " << head(r.right, 1) << "] = ";
			bool any = false;
			for (const RuleTerm &t : r.terms)
			{
				if (t.coeff.is_zero())
					continue;
				if (any)
					os << " + ";
				any = true;
				std::string call = alg.families()[t.target].name + "(";
				if (group)
					call += grp[0] + " + " + grp[1] + scalar_offset_text(t.alpha_offset) + ", ";
				call += idx[0] + " + " + idx[1] + shift_text(t.index_shift) + ")";
				if (t.coeff == Poly(1))
					os << call;
				else
					os << "(" << t.coeff.to_string(names) << ")*" << call;
			}
			if (!any)
				os << "0";
			os << ";\n";
		}
	};
	rules_text(alg.rules(), "bracket");
	if (product)
		rules_text(product->rule_system().rules(), "product");
	os << "}\n";
	return os.str();
}

} // namespace witt
