#include "promise/term.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace promise {

namespace detail {

namespace {

constexpr std::array kKeywords = {
    "id",  "skip", "fail", "test", "dom",    "dia",   "pow", "not",    "and", "or",   "if",     "then",
    "else", "while", "do", "repeat", "until", "BG",  "module", "edb", "reg", "define", "term",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

} // namespace

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

void syntax_error(const SourceLoc& loc, const std::string& message) {
    throw Error(ErrorKind::Syntax, std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + message);
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    bool line_start = true;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t j = 0; j < n; ++j, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            advance(1);
            line_start = true;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        Token tok;
        tok.loc = {line, col};
        tok.line_start = line_start;
        line_start = false;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j]))
                ++j;
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            tok.kind = Tok::Int;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < text.size() && text[j] != '"' && text[j] != '\n')
                ++j;
            if (j >= text.size() || text[j] != '"')
                syntax_error(tok.loc, "unterminated string constant");
            tok.kind = Tok::String;
            tok.text = std::string(text.substr(i + 1, j - i - 1));
            advance(j + 1 - i);
        } else {
            static constexpr std::array kTwo = {"<+", "<~", "==", "!=", ":="};
            std::string_view rest = text.substr(i);
            std::string two;
            for (auto p : kTwo)
                if (rest.starts_with(p))
                    two = p;
            tok.kind = Tok::Punct;
            if (!two.empty()) {
                tok.text = two;
                advance(2);
            } else if (std::string_view("{}(),;~^=:").find(c) != std::string_view::npos) {
                tok.text = std::string(1, c);
                advance(1);
            } else {
                syntax_error(tok.loc, std::string("unexpected character '") + c + "'");
            }
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.loc = {line, col};
    end.line_start = true;
    out.push_back(end);
    return out;
}

TermParser::TermParser(const std::vector<Token>& toks, std::size_t& pos) : toks_(toks), pos_(pos) {}

const Token& TermParser::peek(std::size_t ahead) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
}

bool TermParser::accept(std::string_view word) {
    const auto& t = peek();
    if ((t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == word) {
        ++pos_;
        return true;
    }
    return false;
}

const Token& TermParser::expect(std::string_view word) {
    const auto& t = peek();
    if (!accept(word))
        syntax_error(t.loc, "expected '" + std::string(word) + "', found " +
                                (t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'"));
    return t;
}

std::string TermParser::expect_ident() {
    const auto& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text))
        syntax_error(t.loc, "expected a symbol name");
    ++pos_;
    return t.text;
}

TermPtr TermParser::expr() {
    auto left = seq_expr();
    while (true) {
        auto loc = peek().loc;
        if (accept("<+"))
            left = make_node(TermOp::PrefUnion, {left, seq_expr()}, loc);
        else if (accept("or"))
            left = make_node(TermOp::Or, {left, seq_expr()}, loc);
        else
            return left;
    }
}

TermPtr TermParser::seq_expr() {
    auto left = unary();
    while (true) {
        auto loc = peek().loc;
        if (accept(";"))
            left = make_node(TermOp::Seq, {left, unary()}, loc);
        else if (accept("and"))
            left = make_node(TermOp::And, {left, unary()}, loc);
        else
            return left;
    }
}

TermPtr TermParser::unary() {
    auto loc = peek().loc;
    if (accept("~"))
        return make_node(TermOp::AntiDomain, {unary()}, loc);
    if (accept("not"))
        return make_node(TermOp::Not, {unary()}, loc);
    if (accept("if")) {
        auto cond = expr();
        expect("then");
        auto yes = expr();
        expect("else");
        return make_node(TermOp::If, {cond, yes, unary()}, loc);
    }
    if (accept("while")) {
        auto cond = expr();
        expect("do");
        return make_node(TermOp::While, {cond, unary()}, loc);
    }
    if (accept("repeat")) {
        auto body = expr();
        expect("until");
        return make_node(TermOp::Repeat, {body, unary()}, loc);
    }
    return postfix();
}

TermPtr TermParser::postfix() {
    auto t = primary();
    while (true) {
        auto loc = peek().loc;
        if (!accept("^"))
            return t;
        t = make_node(TermOp::MaxIterate, {t}, loc);
    }
}

TermPtr TermParser::primary() {
    const auto& tok = peek();
    auto loc = tok.loc;
    if (accept("(")) {
        auto t = expr();
        expect(")");
        return t;
    }
    if (accept("id"))
        return make_node(TermOp::Id, {}, loc);
    if (accept("skip"))
        return make_node(TermOp::Skip, {}, loc);
    if (accept("fail"))
        return make_node(TermOp::Fail, {}, loc);
    for (auto [word, op] : {std::pair{"test", TermOp::Test}, std::pair{"dom", TermOp::Dom}}) {
        if (accept(word)) {
            expect("(");
            auto t = expr();
            expect(")");
            return make_node(op, {t}, loc);
        }
    }
    if (accept("dia")) {
        expect("(");
        auto t = expr();
        expect(",");
        auto phi = expr();
        expect(")");
        return make_node(TermOp::Dia, {t, phi}, loc);
    }
    if (accept("pow")) {
        expect("(");
        auto t = expr();
        expect(",");
        const auto& n = peek();
        if (n.kind != Tok::Int)
            syntax_error(n.loc, "pow expects a literal exponent");
        ++pos_;
        expect(")");
        auto node = std::make_shared<Term>();
        node->op = TermOp::Pow;
        node->kids = {t};
        node->power = std::stoi(n.text);
        node->loc = loc;
        return node;
    }
    if (accept("BG")) {
        expect("(");
        auto p = expect_ident();
        expect("!=");
        auto q = expect_ident();
        expect(")");
        auto node = std::make_shared<Term>();
        node->op = TermOp::BG;
        node->p = p;
        node->q = q;
        node->loc = loc;
        return node;
    }
    if (tok.kind == Tok::Ident && !is_keyword(tok.text)) {
        auto name = expect_ident();
        if (accept("==")) {
            auto node = std::make_shared<Term>();
            node->op = TermOp::Eq;
            node->p = name;
            node->q = expect_ident();
            node->loc = loc;
            return node;
        }
        if (defines) {
            for (auto it = defines->rbegin(); it != defines->rend(); ++it)
                if (it->first == name)
                    return it->second;
        }
        auto node = std::make_shared<Term>();
        node->op = TermOp::Module;
        node->name = name;
        node->loc = loc;
        return node;
    }
    syntax_error(loc, tok.kind == Tok::End ? "unexpected end of input" : "unexpected '" + tok.text + "'");
}

} // namespace detail

TermPtr make_node(TermOp op, std::vector<TermPtr> kids, SourceLoc loc) {
    auto t = std::make_shared<Term>();
    t->op = op;
    t->kids = std::move(kids);
    t->loc = loc;
    return t;
}

TermPtr make_id() { return make_node(TermOp::Id, {}); }

TermPtr make_module(std::string name) {
    auto t = std::make_shared<Term>();
    t->op = TermOp::Module;
    t->name = std::move(name);
    return t;
}

TermPtr make_seq(TermPtr a, TermPtr b) { return make_node(TermOp::Seq, {std::move(a), std::move(b)}); }
TermPtr make_pref_union(TermPtr a, TermPtr b) { return make_node(TermOp::PrefUnion, {std::move(a), std::move(b)}); }
TermPtr make_anti(TermPtr t) { return make_node(TermOp::AntiDomain, {std::move(t)}); }
TermPtr make_iterate(TermPtr t) { return make_node(TermOp::MaxIterate, {std::move(t)}); }

TermPtr make_eq(std::string p, std::string q) {
    auto t = std::make_shared<Term>();
    t->op = TermOp::Eq;
    t->p = std::move(p);
    t->q = std::move(q);
    return t;
}

TermPtr make_bg(std::string p, std::string q) {
    auto t = std::make_shared<Term>();
    t->op = TermOp::BG;
    t->p = std::move(p);
    t->q = std::move(q);
    return t;
}

bool terms_equal(const Term& a, const Term& b) {
    if (a.op != b.op || a.name != b.name || a.p != b.p || a.q != b.q || a.power != b.power ||
        a.kids.size() != b.kids.size())
        return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (a.kids[i].get() != b.kids[i].get() && !terms_equal(*a.kids[i], *b.kids[i]))
            return false;
    return true;
}

bool is_core(const Term& t) {
    switch (t.op) {
    case TermOp::Id:
    case TermOp::Module:
    case TermOp::Eq:
    case TermOp::BG:
        return true;
    case TermOp::Seq:
    case TermOp::PrefUnion:
    case TermOp::AntiDomain:
    case TermOp::MaxIterate:
        return std::all_of(t.kids.begin(), t.kids.end(), [](const TermPtr& k) { return is_core(*k); });
    default:
        return false;
    }
}

namespace {

TermPtr test_of(TermPtr phi) { return make_anti(make_anti(std::move(phi))); }

} // namespace

TermPtr desugar(const TermPtr& t) {
    if (is_core(*t))
        return t;
    std::vector<TermPtr> k;
    for (const auto& kid : t->kids)
        k.push_back(desugar(kid));
    switch (t->op) {
    case TermOp::Seq:
    case TermOp::And:
        return make_seq(k[0], k[1]);
    case TermOp::PrefUnion:
    case TermOp::Or:
        return make_pref_union(k[0], k[1]);
    case TermOp::AntiDomain:
    case TermOp::Not:
        return make_anti(k[0]);
    case TermOp::MaxIterate:
        return make_iterate(k[0]);
    case TermOp::Skip:
        return make_id();
    case TermOp::Fail:
        return make_anti(make_id());
    case TermOp::Test:
    case TermOp::Dom:
        return test_of(k[0]);
    case TermOp::Dia:
        return test_of(make_seq(k[0], k[1]));
    case TermOp::If:
        return make_pref_union(make_seq(test_of(k[0]), k[1]), k[2]);
    case TermOp::While:
        return make_seq(make_iterate(make_seq(test_of(k[0]), k[1])), make_anti(test_of(k[0])));
    case TermOp::Repeat:
        return make_seq(k[0], make_seq(make_iterate(make_seq(make_anti(test_of(k[1])), k[0])), test_of(k[1])));
    case TermOp::Pow: {
        if (t->power == 0)
            return make_id();
        TermPtr out = k[0];
        for (int i = 1; i < t->power; ++i)
            out = make_seq(out, k[0]);
        return out;
    }
    default:
        return t;
    }
}

int antidomain_depth(const Term& t) {
    int deepest = 0;
    for (const auto& k : t.kids)
        deepest = std::max(deepest, antidomain_depth(*k));
    switch (t.op) {
    case TermOp::AntiDomain:
    case TermOp::Not:
        return 1 + deepest;
    case TermOp::MaxIterate:
        return 1 + deepest; // the stop condition is a nested search on the body
    case TermOp::PrefUnion:
    case TermOp::Or:
        return std::max(1 + antidomain_depth(*t.kids[0]), antidomain_depth(*t.kids[1]));
    default:
        return deepest;
    }
}

int term_depth(const Term& t) {
    int deepest = 0;
    for (const auto& k : t.kids)
        deepest = std::max(deepest, term_depth(*k));
    return 1 + deepest;
}

namespace {

// 0: union level, 1: sequence level, 2: prefix, 3: postfix/primary
int level_of(TermOp op) {
    switch (op) {
    case TermOp::PrefUnion:
    case TermOp::Or:
        return 0;
    case TermOp::Seq:
    case TermOp::And:
        return 1;
    case TermOp::AntiDomain:
    case TermOp::Not:
    case TermOp::If:
    case TermOp::While:
    case TermOp::Repeat:
        return 2;
    default:
        return 3;
    }
}

void print(const Term& t, int ctx, std::string& out) {
    bool wrap = level_of(t.op) < ctx;
    if (wrap)
        out += '(';
    auto binary = [&](std::string_view sym, int lhs, int rhs) {
        print(*t.kids[0], lhs, out);
        out += sym;
        print(*t.kids[1], rhs, out);
    };
    switch (t.op) {
    case TermOp::Id: out += "id"; break;
    case TermOp::Skip: out += "skip"; break;
    case TermOp::Fail: out += "fail"; break;
    case TermOp::Module: out += t.name; break;
    case TermOp::Eq: out += t.p + " == " + t.q; break;
    case TermOp::BG: out += "BG(" + t.p + " != " + t.q + ")"; break;
    case TermOp::PrefUnion: binary(" <+ ", 0, 1); break;
    case TermOp::Or: binary(" or ", 0, 1); break;
    case TermOp::Seq: binary(" ; ", 1, 2); break;
    case TermOp::And: binary(" and ", 1, 2); break;
    case TermOp::AntiDomain:
        out += '~';
        print(*t.kids[0], 2, out);
        break;
    case TermOp::Not:
        out += "not ";
        print(*t.kids[0], 2, out);
        break;
    case TermOp::MaxIterate:
        print(*t.kids[0], 3, out);
        out += '^';
        break;
    case TermOp::Test:
    case TermOp::Dom:
        out += t.op == TermOp::Test ? "test(" : "dom(";
        print(*t.kids[0], 0, out);
        out += ')';
        break;
    case TermOp::Dia:
        out += "dia(";
        binary(", ", 0, 0);
        out += ')';
        break;
    case TermOp::Pow:
        out += "pow(";
        print(*t.kids[0], 0, out);
        out += ", " + std::to_string(t.power) + ")";
        break;
    case TermOp::If:
        out += "if ";
        print(*t.kids[0], 0, out);
        out += " then ";
        print(*t.kids[1], 0, out);
        out += " else ";
        print(*t.kids[2], 2, out);
        break;
    case TermOp::While:
        out += "while ";
        print(*t.kids[0], 0, out);
        out += " do ";
        print(*t.kids[1], 2, out);
        break;
    case TermOp::Repeat:
        out += "repeat ";
        print(*t.kids[0], 0, out);
        out += " until ";
        print(*t.kids[1], 2, out);
        break;
    }
    if (wrap)
        out += ')';
}

} // namespace

std::string print_term(const Term& t) {
    std::string out;
    print(t, 0, out);
    return out;
}

TermPtr parse_term(std::string_view text) {
    auto toks = detail::tokenize(text);
    std::size_t pos = 0;
    detail::TermParser parser(toks, pos);
    auto t = parser.expr();
    if (toks[pos].kind != detail::Tok::End)
        detail::syntax_error(toks[pos].loc, "unexpected '" + toks[pos].text + "' after term");
    return t;
}

} // namespace promise
