#include <cctype>
#include <set>

#include "buchi/formula.hpp"

namespace buchi {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + msg),
      line(line),
      column(column) {}

namespace {

enum class Tok { End, Ident, Integer, Quant, LParen, RParen, Comma, Dot, And, Or, Not, Rel, Plus, Minus, Star, True, False, KwV, KwP };

struct Token {
    Tok kind;
    std::string text;
    Int value;
    Rel rel;
    int line, column;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    void advance(size_t n) {
        for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    }

    void skip_ws() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n') advance(1);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else {
                break;
            }
        }
    }

    Token next() {
        skip_ws();
        Token t;
        t.line = line;
        t.column = col;
        if (pos >= src.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) advance(1);
            t.kind = Tok::Integer;
            t.text = src.substr(start, pos - start);
            t.value = Int(t.text);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                advance(1);
            t.text = src.substr(start, pos - start);
            if (t.text == "E" || t.text == "A") {
                t.kind = Tok::Quant;
            } else if (t.text == "V") {
                t.kind = Tok::KwV;
            } else if (t.text == "P") {
                t.kind = Tok::KwP;
            } else if (t.text == "true") {
                t.kind = Tok::True;
            } else if (t.text == "false") {
                t.kind = Tok::False;
            } else {
                t.kind = Tok::Ident;
            }
            return t;
        }
        auto two = src.substr(pos, 2);
        if (two == "<=") {
            t.kind = Tok::Rel;
            t.rel = Rel::Le;
            advance(2);
            return t;
        }
        if (two == ">=") {
            t.kind = Tok::Rel;
            t.rel = Rel::Ge;
            advance(2);
            return t;
        }
        advance(1);
        switch (c) {
            case '(': t.kind = Tok::LParen; return t;
            case ')': t.kind = Tok::RParen; return t;
            case ',': t.kind = Tok::Comma; return t;
            case '.': t.kind = Tok::Dot; return t;
            case '&': t.kind = Tok::And; return t;
            case '|': t.kind = Tok::Or; return t;
            case '~': t.kind = Tok::Not; return t;
            case '+': t.kind = Tok::Plus; return t;
            case '-': t.kind = Tok::Minus; return t;
            case '*': t.kind = Tok::Star; return t;
            case '=': t.kind = Tok::Rel; t.rel = Rel::Eq; return t;
            case '<': t.kind = Tok::Rel; t.rel = Rel::Lt; return t;
            case '>': t.kind = Tok::Rel; t.rel = Rel::Gt; return t;
            default:
                throw ParseError(std::string("unknown symbol '") + c + "'", t.line, t.column);
        }
    }
};

// Linear expression as coefficient map plus constant.
struct LinExpr {
    std::map<std::string, Int> coeffs;
    Int constant = 0;
};

struct Parser {
    Lexer lexer;
    Token tok;
    int base;

    explicit Parser(const std::string& src, int base) : lexer{src}, base(base) { tok = lexer.next(); }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, tok.line, tok.column); }

    void eat(Tok kind, const std::string& what) {
        if (tok.kind != kind) fail("expected " + what);
        tok = lexer.next();
    }

    Formula parse_formula() {
        if (tok.kind == Tok::Quant) {
            bool exists = tok.text == "E";
            tok = lexer.next();
            if (tok.kind != Tok::Ident) fail("expected variable after quantifier");
            std::string var = tok.text;
            tok = lexer.next();
            eat(Tok::Dot, "'.'");
            Formula body = parse_formula();
            return exists ? f_exists(var, std::move(body)) : f_forall(var, std::move(body));
        }
        return parse_or();
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        while (tok.kind == Tok::Or) {
            tok = lexer.next();
            parts.push_back(parse_and());
        }
        return f_or(std::move(parts));
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_lit()};
        while (tok.kind == Tok::And) {
            tok = lexer.next();
            parts.push_back(parse_lit());
        }
        return f_and(std::move(parts));
    }

    Formula parse_lit() {
        if (tok.kind == Tok::Not) {
            tok = lexer.next();
            return f_not(parse_lit());
        }
        if (tok.kind == Tok::LParen) {
            tok = lexer.next();
            Formula f = parse_formula();
            eat(Tok::RParen, "')'");
            return f;
        }
        // A quantifier in literal position binds as far right as possible.
        if (tok.kind == Tok::Quant) return parse_formula();
        return parse_atom();
    }

    Formula parse_atom() {
        if (tok.kind == Tok::True) {
            tok = lexer.next();
            return f_true(base);
        }
        if (tok.kind == Tok::False) {
            tok = lexer.next();
            return f_false(base);
        }
        if (tok.kind == Tok::KwV) {
            tok = lexer.next();
            eat(Tok::LParen, "'('");
            if (tok.kind != Tok::Ident) fail("expected variable in V(,)");
            std::string x = tok.text;
            tok = lexer.next();
            eat(Tok::Comma, "','");
            if (tok.kind != Tok::Ident) fail("expected variable in V(,)");
            std::string y = tok.text;
            tok = lexer.next();
            eat(Tok::RParen, "')'");
            return f_val(base, x, y);
        }
        if (tok.kind == Tok::KwP) {
            tok = lexer.next();
            eat(Tok::LParen, "'('");
            if (tok.kind != Tok::Ident) fail("expected variable in P()");
            std::string x = tok.text;
            tok = lexer.next();
            eat(Tok::RParen, "')'");
            return f_pow(base, x);
        }
        LinExpr lhs = parse_linexp();
        if (tok.kind != Tok::Rel) fail("expected a relation");
        Rel rel = tok.rel;
        tok = lexer.next();
        LinExpr rhs = parse_linexp();
        // lhs rel rhs  ==>  (lhs - rhs) rel (rhs.const - lhs.const)
        std::map<std::string, Int> coeffs = lhs.coeffs;
        for (const auto& [v, c] : rhs.coeffs) coeffs[v] -= c;
        Int constant = rhs.constant - lhs.constant;
        return f_linear(base, std::move(coeffs), rel, std::move(constant));
    }

    LinExpr parse_linexp() {
        LinExpr e;
        bool negate = false;
        if (tok.kind == Tok::Minus) {
            negate = true;
            tok = lexer.next();
        }
        parse_term(e, negate);
        while (tok.kind == Tok::Plus || tok.kind == Tok::Minus) {
            bool minus = tok.kind == Tok::Minus;
            tok = lexer.next();
            parse_term(e, minus);
        }
        return e;
    }

    void parse_term(LinExpr& e, bool negate) {
        Int coeff = 1;
        bool have_coeff = false;
        if (tok.kind == Tok::Integer) {
            coeff = tok.value;
            tok = lexer.next();
            have_coeff = true;
            if (tok.kind == Tok::Star) {
                tok = lexer.next();
            } else {
                // plain constant
                e.constant += negate ? Int(-coeff) : coeff;
                return;
            }
        }
        if (tok.kind == Tok::Ident) {
            e.coeffs[tok.text] += negate ? Int(-coeff) : coeff;
            tok = lexer.next();
            return;
        }
        if (tok.kind == Tok::Integer && have_coeff) {
            // integer "*" integer: fold
            Int v = coeff * tok.value;
            tok = lexer.next();
            e.constant += negate ? Int(-v) : v;
            return;
        }
        fail("expected a variable or integer");
    }
};

}  // namespace

Formula parse_formula(const std::string& text, int base,
                      const std::optional<std::vector<std::string>>& query_vars) {
    if (base < 2) throw std::invalid_argument("base must be >= 2");
    Parser parser(text, base);
    Formula f = parser.parse_formula();
    if (parser.tok.kind != Tok::End) parser.fail("trailing input");
    if (query_vars) {
        // Extra free variables are implicitly existentially quantified; make
        // that explicit so the declared query variables are exactly the free
        // ones.
        std::set<std::string> declared(query_vars->begin(), query_vars->end());
        auto free = free_variables(f);
        for (auto it = free.rbegin(); it != free.rend(); ++it)
            if (!declared.count(*it)) f = f_exists(*it, std::move(f));
    }
    return f;
}

}  // namespace buchi
