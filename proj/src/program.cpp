#include "promise/program.hpp"

#include "lexer.hpp"

#include <set>

namespace promise {

using detail::Tok;
using detail::Token;

std::string to_string(const Diagnostic& d) {
    return std::to_string(d.loc.line) + ":" + std::to_string(d.loc.col) + ": " + std::string(to_string(d.kind)) +
           ": " + d.message;
}

namespace {

class ProgramParser {
public:
    explicit ProgramParser(std::string_view text) : toks_(detail::tokenize(text)) {}

    Program run() {
        Program p;
        bool have_term = false;
        while (peek().kind != Tok::End) {
            const auto& tok = peek();
            if (tok.kind != Tok::Ident)
                detail::syntax_error(tok.loc, "expected a declaration, found '" + tok.text + "'");
            if (tok.text == "edb") {
                ++pos_;
                auto name = ident();
                const auto& n = peek();
                if (n.kind != Tok::Int)
                    detail::syntax_error(n.loc, "expected an arity after " + name);
                ++pos_;
                declare(name, tok.loc);
                p.vocabulary.add_edb(name, std::stoi(n.text));
            } else if (tok.text == "reg") {
                ++pos_;
                do {
                    auto loc = peek().loc;
                    auto name = ident();
                    declare(name, loc);
                    p.vocabulary.add_register(name);
                } while (peek().kind == Tok::Ident && !peek().line_start);
            } else if (tok.text == "module") {
                ++pos_;
                module(p);
            } else if (tok.text == "define") {
                ++pos_;
                auto name = ident();
                if (!accept("=") && !accept(":="))
                    detail::syntax_error(peek().loc, "expected '=' after define " + name);
                defines_.emplace_back(name, expr());
            } else if (tok.text == "term") {
                ++pos_;
                expect(":");
                if (have_term)
                    detail::syntax_error(tok.loc, "more than one term");
                have_term = true;
                p.main = expr();
            } else {
                detail::syntax_error(tok.loc, "expected a declaration, found '" + tok.text + "'");
            }
        }
        if (!have_term)
            detail::syntax_error(peek().loc, "missing 'term:'");
        return p;
    }

private:
    const Token& peek() const { return toks_[pos_]; }

    bool accept(std::string_view word) {
        if ((peek().kind == Tok::Punct || peek().kind == Tok::Ident) && peek().text == word) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(std::string_view word) {
        if (!accept(word))
            detail::syntax_error(peek().loc, "expected '" + std::string(word) + "'");
    }

    std::string ident() {
        const auto& t = peek();
        if (t.kind != Tok::Ident || detail::is_keyword(t.text))
            detail::syntax_error(t.loc, "expected a name");
        ++pos_;
        return t.text;
    }

    void declare(const std::string& name, SourceLoc loc) {
        if (name == kAdom)
            throw Error(ErrorKind::DuplicateSymbol,
                        std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": 'adom' is reserved");
        if (!declared_.insert(name).second)
            throw Error(ErrorKind::DuplicateSymbol,
                        std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + name + " declared twice");
    }

    TermPtr expr() {
        detail::TermParser parser(toks_, pos_);
        parser.defines = &defines_;
        return parser.expr();
    }

    void module(Program& p) {
        auto loc = peek().loc;
        ModuleDef def;
        def.name = ident();
        if (p.modules.count(def.name))
            throw Error(ErrorKind::DuplicateSymbol, std::to_string(loc.line) + ":" + std::to_string(loc.col) +
                                                        ": module " + def.name + " defined twice");
        expect("{");
        auto& locs = p.rule_locs[def.name];
        while (!accept("}")) {
            if (accept(";"))
                continue;
            if (peek().kind == Tok::End)
                detail::syntax_error(peek().loc, "unterminated module " + def.name);
            locs.push_back(peek().loc);
            def.rules.push_back(rule());
        }
        p.module_locs[def.name] = loc;
        p.modules.emplace(def.name, std::move(def));
    }

    Rule rule() {
        Rule r;
        r.head = ident();
        expect("(");
        r.body.head_var = ident();
        expect(")");
        expect("<~");
        do {
            r.body.atoms.push_back(atom());
        } while (accept(","));
        return r;
    }

    Atom atom() {
        Atom a;
        a.symbol = ident();
        expect("(");
        if (!accept(")")) {
            do {
                const auto& t = peek();
                if (t.kind == Tok::String) {
                    ++pos_;
                    a.args.push_back(Arg::constant(t.text));
                } else {
                    a.args.push_back(Arg::var(ident()));
                }
            } while (accept(","));
            expect(")");
        }
        return a;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::set<std::string> declared_;
    std::vector<std::pair<std::string, TermPtr>> defines_;
};

void check_term(const Program& p, const Term& t, std::vector<Diagnostic>& out) {
    const auto& v = p.vocabulary;
    switch (t.op) {
    case TermOp::Module:
        if (!p.modules.count(t.name))
            out.push_back({ErrorKind::UnknownModule, "no module named " + t.name, t.loc});
        break;
    case TermOp::Eq:
    case TermOp::BG:
        for (const auto& sym : {t.p, t.q}) {
            if (!v.declares(sym) && sym != kAdom)
                out.push_back({ErrorKind::UnknownSymbol, "undeclared symbol " + sym, t.loc});
            else if (!is_unary_symbol(v, sym))
                out.push_back({ErrorKind::NonUnarySymbolInTest, sym + " is not unary", t.loc});
        }
        break;
    default:
        break;
    }
    for (const auto& k : t.kids)
        check_term(p, *k, out);
}

} // namespace

bool is_unary_symbol(const Vocabulary& v, std::string_view name) {
    if (v.find_register(name))
        return true;
    auto e = v.find_edb(name);
    return e && v.edb()[*e].arity == 1;
}

std::vector<Diagnostic> validate_term(const Program& p, const Term& t) {
    std::vector<Diagnostic> out;
    check_term(p, t, out);
    return out;
}

Program parse_program_text(std::string_view text) { return ProgramParser(text).run(); }

std::vector<Diagnostic> validate_program(const Program& p) {
    std::vector<Diagnostic> out;
    const auto& v = p.vocabulary;
    for (const auto& [name, def] : p.modules) {
        auto mloc = p.module_locs.count(name) ? p.module_locs.at(name) : SourceLoc{};
        const auto* rlocs = p.rule_locs.count(name) ? &p.rule_locs.at(name) : nullptr;
        std::set<std::string> heads;
        if (def.rules.empty())
            out.push_back({ErrorKind::Syntax, "module " + name + " has no rules", mloc});
        for (std::size_t i = 0; i < def.rules.size(); ++i) {
            const auto& r = def.rules[i];
            auto loc = rlocs && i < rlocs->size() ? (*rlocs)[i] : mloc;
            if (!v.find_register(r.head))
                out.push_back({ErrorKind::UnknownSymbol, r.head + " is not a declared register", loc});
            if (!heads.insert(r.head).second)
                out.push_back({ErrorKind::DuplicateHead, "module " + name + " writes " + r.head + " twice", loc});
            try {
                free_and_bound_vars(r.body);
            } catch (const Error& e) {
                out.push_back({e.kind(), "head variable " + r.body.head_var + " does not occur in the body", loc});
            }
            for (const auto& a : r.body.atoms) {
                int arity = -1;
                if (a.symbol == kAdom || v.find_register(a.symbol))
                    arity = 1;
                else if (auto e = v.find_edb(a.symbol))
                    arity = v.edb()[*e].arity;
                if (arity < 0)
                    out.push_back({ErrorKind::UnknownSymbol, "undeclared symbol " + a.symbol, loc});
                else if (static_cast<int>(a.args.size()) != arity)
                    out.push_back({ErrorKind::Arity,
                                   a.symbol + " expects " + std::to_string(arity) + " arguments, got " +
                                       std::to_string(a.args.size()),
                                   loc});
            }
        }
    }
    if (p.main)
        check_term(p, *p.main, out);
    return out;
}

Program parse_program(std::string_view text) {
    auto p = parse_program_text(text);
    auto diags = validate_program(p);
    if (!diags.empty())
        throw Error(diags.front().kind, std::to_string(diags.front().loc.line) + ":" +
                                            std::to_string(diags.front().loc.col) + ": " + diags.front().message);
    return p;
}

void check_vocabulary(const Program& p, const Structure& s) {
    if (!p.vocabulary.compatible_with(s.vocabulary()))
        throw Error(ErrorKind::VocabularyMismatch, "structure vocabulary differs from the program's declarations");
}

} // namespace promise
