/*
 * Copyright (c) The jlogic Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jlogic/parser.hpp"

#include <algorithm>
#include <cctype>

#include "jlogic/errors.hpp"

namespace jlogic {

namespace {

enum class Tok {
    Ident,
    String,
    Var,
    LParen,
    RParen,
    Colon,
    Comma,
    Dot,
    LAngle,
    RAngle,
    Eq,
    Neq,
    If,
    Arrow,
    Empty,
    Not,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    VarSort sort = VarSort::Atomic;
    std::size_t line = 1;
    std::size_t column = 1;
};

bool ident_start(unsigned char c) { return std::isalnum(c) || c == '_'; }
bool ident_char(unsigned char c) { return ident_start(c) || c == '\'' || c == '^'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip();
        Token t;
        t.line = line_;
        t.column = column();
        if (pos_ >= text_.size()) return t;
        unsigned char c = static_cast<unsigned char>(text_[pos_]);
        auto single = [&](Tok k, std::size_t len) {
            t.kind = k;
            t.text = std::string(text_.substr(pos_, len));
            pos_ += len;
            return t;
        };
        if (starts("¬")) return single(Tok::Not, 2);
        if (starts("≠")) return single(Tok::Neq, 3);
        if (starts("←")) return single(Tok::If, 3);
        if (starts("→")) return single(Tok::Arrow, 3);
        if (starts("∅")) return single(Tok::Empty, 3);
        if (starts(":-")) return single(Tok::If, 2);
        if (starts("->")) return single(Tok::Arrow, 2);
        if (starts("!=")) return single(Tok::Neq, 2);
        switch (c) {
        case '(': return single(Tok::LParen, 1);
        case ')': return single(Tok::RParen, 1);
        case ':': return single(Tok::Colon, 1);
        case ',': return single(Tok::Comma, 1);
        case '.': return single(Tok::Dot, 1);
        case '<': return single(Tok::LAngle, 1);
        case '>': return single(Tok::RAngle, 1);
        case '=': return single(Tok::Eq, 1);
        case '!': return single(Tok::Not, 1);
        default: break;
        }
        if (c == '{') {
            std::size_t p = pos_ + 1;
            while (p < text_.size() && (text_[p] == ' ' || text_[p] == '\t')) ++p;
            if (p < text_.size() && text_[p] == '}') {
                t.kind = Tok::Empty;
                t.text = "{}";
                pos_ = p + 1;
                return t;
            }
            fail("expected '}'", t);
        }
        if (c == '@' || c == '$' || c == '%' || c == '?' || c == '#') {
            std::size_t p = pos_ + 1;
            while (p < text_.size() && ident_char(static_cast<unsigned char>(text_[p]))) ++p;
            if (p == pos_ + 1) fail(std::string("expected a variable name after '") + char(c) + "'", t);
            t.kind = Tok::Var;
            t.sort = c == '@' ? VarSort::Atomic : c == '$' ? VarSort::Path : c == '%' ? VarSort::Value : c == '?' ? VarSort::OptPath : VarSort::AnyKey;
            t.text = std::string(text_.substr(pos_ + 1, p - pos_ - 1));
            pos_ = p;
            return t;
        }
        if (c == '"') {
            std::string s;
            std::size_t p = pos_ + 1;
            while (p < text_.size() && text_[p] != '"') {
                if (text_[p] == '\n') break;
                if (text_[p] == '\\' && p + 1 < text_.size()) ++p;
                s += text_[p++];
            }
            if (p >= text_.size() || text_[p] != '"') fail("unterminated string", t);
            if (s.empty()) fail("atomic keys are nonempty", t);
            t.kind = Tok::String;
            t.text = std::move(s);
            pos_ = p + 1;
            return t;
        }
        if (ident_start(c)) {
            std::size_t p = pos_;
            while (p < text_.size() && ident_char(static_cast<unsigned char>(text_[p]))) ++p;
            t.kind = Tok::Ident;
            t.text = std::string(text_.substr(pos_, p - pos_));
            pos_ = p;
            return t;
        }
        fail(std::string("unexpected character '") + char(c) + "'", t);
    }

private:
    bool starts(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    std::size_t column() const { return pos_ - line_start_ + 1; }

    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++pos_;
                ++line_;
                line_start_ = pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '%' && (pos_ + 1 >= text_.size() || !ident_char(static_cast<unsigned char>(text_[pos_ + 1])))) {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw SyntaxError(msg, at.line, at.column); }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t line_start_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {
        for (;;) {
            toks_.push_back(lex_.next());
            if (toks_.back().kind == Tok::End) break;
        }
        cur_ = toks_[0];
        peek_ = at(1);
    }

    bool at_end() const { return cur_.kind == Tok::End; }

    Program program() {
        Program p;
        while (!at_end()) {
            if (cur_.kind == Tok::Ident && (cur_.text == "input" || cur_.text == "output") && peek_.kind == Tok::Ident) {
                bool in = cur_.text == "input";
                advance();
                auto& slot = in ? p.declared_inputs : p.declared_outputs;
                if (!slot) slot.emplace();
                slot->insert(relation_name());
                while (cur_.kind == Tok::Comma) {
                    advance();
                    slot->insert(relation_name());
                }
                expect(Tok::Dot, "'.'");
                continue;
            }
            p.rules.push_back(rule(true));
        }
        return p;
    }

    Rule rule(bool require_dot) {
        Rule r;
        r.span = {cur_.line, cur_.column};
        r.head = predicate();
        if (cur_.kind == Tok::If) {
            advance();
            if (cur_.kind != Tok::Dot && cur_.kind != Tok::End) {
                r.body.push_back(literal());
                while (cur_.kind == Tok::Comma) {
                    advance();
                    r.body.push_back(literal());
                }
            }
        }
        if (require_dot) expect(Tok::Dot, "'.'");
        else if (cur_.kind == Tok::Dot) advance();
        return r;
    }

    Jaegd jaegd() {
        Jaegd j;
        for (;;) {
            Literal l = literal();
            if (l.negated) fail("dependency bodies are positive", cur_);
            if (l.is_predicate()) j.body.push_back(std::move(l.predicate()));
            else j.equalities.push_back(std::move(l.equality()));
            if (cur_.kind != Tok::Comma) break;
            advance();
        }
        expect(Tok::Arrow, "'->'");
        if ((cur_.kind == Tok::Ident && cur_.text == "false" && peek_.kind != Tok::Eq) || cur_.text == "⊥") {
            advance();
            j.consequent = Consequent::make_bottom();
        } else {
            AtomicTerm a = key_term();
            expect(Tok::Eq, "'='");
            AtomicTerm b = key_term();
            j.consequent = Consequent::make_equal(a, b);
        }
        if (cur_.kind == Tok::Dot) advance();
        return j;
    }

    PathExpr path_expr() {
        PathExpr e;
        e.push_back(path_item());
        while (dot_continues_path()) {
            advance();
            e.push_back(path_item());
        }
        return e;
    }

    void expect_end() {
        if (!at_end()) fail("unexpected trailing input", cur_);
    }

private:
    const Token& at(std::size_t i) const { return toks_[std::min(i, toks_.size() - 1)]; }

    void advance() {
        ++pos_;
        cur_ = at(pos_);
        peek_ = at(pos_ + 1);
    }

    // A dot continues a path unless it ends a statement: the next token then
    // begins a rule head R( or a declaration such as `input R`.
    bool dot_continues_path() const {
        if (cur_.kind != Tok::Dot || !starts_item(peek_)) return false;
        if (peek_.kind == Tok::Ident) {
            const Token& after = at(pos_ + 2);
            if (after.kind == Tok::LParen) return false;
            if ((peek_.text == "input" || peek_.text == "output") && after.kind == Tok::Ident) return false;
        }
        return true;
    }

    [[noreturn]] static void fail(const std::string& msg, const Token& at) { throw SyntaxError(msg, at.line, at.column); }

    void expect(Tok k, const char* what) {
        if (cur_.kind != k) fail(std::string("expected ") + what, cur_);
        advance();
    }

    std::string relation_name() {
        if (cur_.kind != Tok::Ident) fail("expected a relation name", cur_);
        std::string n = cur_.text;
        advance();
        return n;
    }

    static bool starts_item(const Token& t) {
        return t.kind == Tok::Ident || t.kind == Tok::String || t.kind == Tok::LAngle || (t.kind == Tok::Var && t.sort != VarSort::Value);
    }

    Predicate predicate() {
        Predicate p;
        p.relation = relation_name();
        expect(Tok::LParen, "'('");
        p.path = path_expr();
        expect(Tok::Colon, "':'");
        p.value = value_term();
        expect(Tok::RParen, "')'");
        return p;
    }

    PathItem path_item() {
        Token t = cur_;
        switch (t.kind) {
        case Tok::Ident:
        case Tok::String:
            advance();
            return PathItem::make_constant(t.text);
        case Tok::Var:
            if (t.sort == VarSort::Value) fail("value variables cannot occur in paths", t);
            advance();
            return PathItem::make_var(t.sort, t.text);
        case Tok::LAngle: {
            advance();
            PathExpr inner = path_expr();
            expect(Tok::RAngle, "'>'");
            return PathItem::make_packed(std::move(inner));
        }
        default:
            fail("expected a path expression", t);
        }
    }

    AtomicTerm value_term() {
        Token t = cur_;
        if (t.kind == Tok::Empty) {
            advance();
            return AtomicTerm::empty_object();
        }
        if (t.kind == Tok::Var && (t.sort == VarSort::Atomic || t.sort == VarSort::Value)) {
            advance();
            return AtomicTerm::make_var(t.sort, t.text);
        }
        if (t.kind == Tok::Ident || t.kind == Tok::String) {
            advance();
            return AtomicTerm::make_constant(t.text);
        }
        fail("expected an atomic term", t);
    }

    AtomicTerm key_term() {
        Token t = cur_;
        if (t.kind == Tok::Var && t.sort == VarSort::Atomic) {
            advance();
            return AtomicTerm::make_var(t.sort, t.text);
        }
        if (t.kind == Tok::Ident || t.kind == Tok::String) {
            advance();
            return AtomicTerm::make_constant(t.text);
        }
        fail("expected a constant or an atomic variable", t);
    }

    PathExpr equality_side() {
        if (cur_.kind == Tok::Empty) {
            advance();
            return PathExpr{PathItem::make_empty_object()};
        }
        if (cur_.kind == Tok::Var && cur_.sort == VarSort::Value) {
            PathExpr e{PathItem::make_var(VarSort::Value, cur_.text)};
            advance();
            return e;
        }
        return path_expr();
    }

    Literal literal() {
        Literal l;
        l.span = {cur_.line, cur_.column};
        bool negated = false;
        if (cur_.kind == Tok::Not) {
            negated = true;
            advance();
        } else if (cur_.kind == Tok::Ident && cur_.text == "not" && (peek_.kind == Tok::Ident || peek_.kind == Tok::Var || peek_.kind == Tok::Empty || peek_.kind == Tok::LAngle || peek_.kind == Tok::String)) {
            negated = true;
            advance();
        }
        if (cur_.kind == Tok::Ident && peek_.kind == Tok::LParen) {
            l.negated = negated;
            l.atom = predicate();
            return l;
        }
        PathExpr lhs = equality_side();
        bool neq = false;
        if (cur_.kind == Tok::Neq) neq = true;
        else if (cur_.kind != Tok::Eq) fail("expected '=' or '!='", cur_);
        advance();
        PathExpr rhs = equality_side();
        l.negated = negated != neq;
        l.atom = Equality{std::move(lhs), std::move(rhs)};
        return l;
    }

    Lexer lex_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Token cur_;
    Token peek_;
};

} // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }

Rule parse_rule(std::string_view text) {
    Parser p(text);
    Rule r = p.rule(false);
    p.expect_end();
    return r;
}

PathExpr parse_path_expr(std::string_view text) {
    Parser p(text);
    PathExpr e = p.path_expr();
    p.expect_end();
    return e;
}

std::vector<Jaegd> parse_jaegds(std::string_view text) {
    Parser p(text);
    std::vector<Jaegd> out;
    while (!p.at_end()) out.push_back(p.jaegd());
    return out;
}

Jaegd parse_jaegd(std::string_view text) {
    Parser p(text);
    Jaegd j = p.jaegd();
    p.expect_end();
    return j;
}

} // namespace jlogic
