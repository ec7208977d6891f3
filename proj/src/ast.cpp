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

#include "jlogic/ast.hpp"

#include "jlogic/errors.hpp"

namespace jlogic {

char sigil(VarSort sort) {
    switch (sort) {
    case VarSort::Atomic: return '@';
    case VarSort::Path: return '$';
    case VarSort::Value: return '%';
    case VarSort::OptPath: return '?';
    case VarSort::AnyKey: return '#';
    }
    return '@';
}

std::string to_string(const Variable& v) { return sigil(v.sort) + v.name; }

std::set<std::string> Program::idb_names() const {
    std::set<std::string> out;
    for (const auto& r : rules) out.insert(r.head.relation);
    return out;
}

std::set<std::string> Program::edb_names() const {
    auto idb = idb_names();
    std::set<std::string> out;
    for (const auto& r : rules)
        for (const auto& l : r.body)
            if (l.is_predicate() && !idb.count(l.predicate().relation)) out.insert(l.predicate().relation);
    return out;
}

std::set<std::string> Program::vocab_in() const { return declared_inputs ? *declared_inputs : edb_names(); }
std::set<std::string> Program::vocab_out() const { return declared_outputs ? *declared_outputs : idb_names(); }

// ---------------------------------------------------------------------------

void collect_vars(const PathExpr& e, std::set<Variable>& out) {
    for (const auto& it : e) {
        if (it.is_var()) out.insert(it.var);
        else if (it.is_packed()) collect_vars(it.inner, out);
    }
}

void collect_vars(const AtomicTerm& t, std::set<Variable>& out) {
    if (t.is_var()) out.insert(t.var);
}

void collect_vars(const Predicate& p, std::set<Variable>& out) {
    collect_vars(p.path, out);
    collect_vars(p.value, out);
}

void collect_vars(const Literal& l, std::set<Variable>& out) {
    if (l.is_predicate()) {
        collect_vars(l.predicate(), out);
    } else {
        collect_vars(l.equality().lhs, out);
        collect_vars(l.equality().rhs, out);
    }
}

std::set<Variable> vars_of(const PathExpr& e) {
    std::set<Variable> out;
    collect_vars(e, out);
    return out;
}

std::set<Variable> vars_of(const Rule& r) {
    std::set<Variable> out;
    collect_vars(r.head, out);
    for (const auto& l : r.body) collect_vars(l, out);
    return out;
}

std::set<Variable> vars_of(const Jaegd& j) {
    std::set<Variable> out;
    for (const auto& p : j.body) collect_vars(p, out);
    for (const auto& e : j.equalities) {
        collect_vars(e.lhs, out);
        collect_vars(e.rhs, out);
    }
    if (!j.consequent.bottom) {
        collect_vars(j.consequent.lhs, out);
        collect_vars(j.consequent.rhs, out);
    }
    return out;
}

std::size_t count_occurrences(const PathExpr& e, const Variable& v) {
    std::size_t n = 0;
    for (const auto& it : e) {
        if (it.is_var() && it.var == v) ++n;
        else if (it.is_packed()) n += count_occurrences(it.inner, v);
    }
    return n;
}

bool is_ground(const PathExpr& e) {
    for (const auto& it : e) {
        if (it.is_var() || it.kind == PathItem::Kind::EmptyObject) return false;
        if (it.is_packed() && !is_ground(it.inner)) return false;
    }
    return true;
}

bool has_packing(const PathExpr& e) {
    for (const auto& it : e) {
        if (it.is_packed()) return true;
        if (it.is_constant() && it.constant.is_packed()) return true;
    }
    return false;
}

Path to_path(const PathExpr& e) {
    Path out;
    out.reserve(e.size());
    for (const auto& it : e) {
        if (it.is_constant()) out.push_back(it.constant);
        else if (it.is_packed()) {
            Path inner = to_path(it.inner);
            out.push_back(Key::packed(inner));
        } else {
            throw Error("path expression is not ground: " + to_string(e));
        }
    }
    return out;
}

PathExpr to_expr(std::span<const Key> p) {
    PathExpr out;
    out.reserve(p.size());
    for (Key k : p) {
        if (k.is_packed()) out.push_back(PathItem::make_packed(to_expr(k.inner())));
        else out.push_back(PathItem::make_constant(k));
    }
    return out;
}

// ---------------------------------------------------------------------------

PathExpr substitute(const Substitution& s, const PathExpr& e) {
    if (s.empty()) return e;
    PathExpr out;
    out.reserve(e.size());
    for (const auto& it : e) {
        if (it.is_var()) {
            auto f = s.find(it.var);
            if (f == s.end()) out.push_back(it);
            else out.insert(out.end(), f->second.begin(), f->second.end());
        } else if (it.is_packed()) {
            out.push_back(PathItem::make_packed(substitute(s, it.inner)));
        } else {
            out.push_back(it);
        }
    }
    return out;
}

AtomicTerm substitute(const Substitution& s, const AtomicTerm& t) {
    if (!t.is_var()) return t;
    auto f = s.find(t.var);
    if (f == s.end()) return t;
    const PathExpr& img = f->second;
    if (img.size() != 1) throw Error("atomic term mapped to a path: " + to_string(t.var));
    const PathItem& it = img.front();
    if (it.is_constant() && it.constant.is_atomic()) return AtomicTerm::make_constant(it.constant);
    if (it.is_var(VarSort::Atomic) || it.is_var(VarSort::Value)) return AtomicTerm{AtomicTerm::Kind::Var, {}, it.var};
    if (it.kind == PathItem::Kind::EmptyObject) return AtomicTerm::empty_object();
    throw Error("atomic term mapped to a non-atomic expression: " + to_string(t.var));
}

Predicate substitute(const Substitution& s, const Predicate& p) { return Predicate{p.relation, substitute(s, p.path), substitute(s, p.value)}; }

Literal substitute(const Substitution& s, const Literal& l) {
    Literal out = l;
    if (l.is_predicate()) out.atom = substitute(s, l.predicate());
    else out.atom = Equality{substitute(s, l.equality().lhs), substitute(s, l.equality().rhs)};
    return out;
}

Rule substitute(const Substitution& s, const Rule& r) {
    Rule out;
    out.head = substitute(s, r.head);
    out.span = r.span;
    out.body.reserve(r.body.size());
    for (const auto& l : r.body) out.body.push_back(substitute(s, l));
    return out;
}

Consequent substitute(const Substitution& s, const Consequent& c) {
    if (c.bottom) return c;
    return Consequent::make_equal(substitute(s, c.lhs), substitute(s, c.rhs));
}

Jaegd substitute(const Substitution& s, const Jaegd& j) {
    Jaegd out;
    for (const auto& p : j.body) out.body.push_back(substitute(s, p));
    for (const auto& e : j.equalities) out.equalities.push_back(Equality{substitute(s, e.lhs), substitute(s, e.rhs)});
    out.consequent = substitute(s, j.consequent);
    return out;
}

static Substitution renaming(const std::set<Variable>& vars, const std::string& salt) {
    Substitution s;
    for (const auto& v : vars) s[v] = PathExpr{PathItem::make_var(v.sort, v.name + "_" + salt)};
    return s;
}

Rule rename_apart(const Rule& r, const std::string& salt) { return substitute(renaming(vars_of(r), salt), r); }
Jaegd rename_apart(const Jaegd& j, const std::string& salt) { return substitute(renaming(vars_of(j), salt), j); }

static void constants_in(const PathExpr& e, std::set<std::string>& out) {
    for (const auto& it : e) {
        if (it.is_constant()) {
            Path p{it.constant};
            for_each_atom(p, [&](Key k) { out.insert(k.symbol()); });
        } else if (it.is_packed()) {
            constants_in(it.inner, out);
        }
    }
}

static void constants_in(const Predicate& p, std::set<std::string>& out) {
    constants_in(p.path, out);
    if (p.value.is_constant()) out.insert(p.value.constant.symbol());
}

std::set<std::string> constants_of(const Rule& r) {
    std::set<std::string> out;
    constants_in(r.head, out);
    for (const auto& l : r.body) {
        if (l.is_predicate()) {
            constants_in(l.predicate(), out);
        } else {
            constants_in(l.equality().lhs, out);
            constants_in(l.equality().rhs, out);
        }
    }
    return out;
}

std::set<std::string> constants_of(const Program& p) {
    std::set<std::string> out;
    for (const auto& r : p.rules) out.merge(constants_of(r));
    return out;
}

// ---------------------------------------------------------------------------

std::string to_string(const PathItem& item) {
    switch (item.kind) {
    case PathItem::Kind::Constant: return to_string(item.constant);
    case PathItem::Kind::Var: return to_string(item.var);
    case PathItem::Kind::Packed: return "<" + to_string(item.inner) + ">";
    case PathItem::Kind::EmptyObject: return "{}";
    }
    return {};
}

std::string to_string(const PathExpr& e) {
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out += '.';
        out += to_string(e[i]);
    }
    return out;
}

std::string to_string(const AtomicTerm& t) {
    switch (t.kind) {
    case AtomicTerm::Kind::EmptyObject: return "{}";
    case AtomicTerm::Kind::Constant: return to_string(t.constant);
    case AtomicTerm::Kind::Var: return to_string(t.var);
    }
    return {};
}

std::string to_string(const Predicate& p) { return p.relation + "(" + to_string(p.path) + ":" + to_string(p.value) + ")"; }

std::string to_string(const Literal& l) {
    if (l.is_predicate()) return (l.negated ? "not " : "") + to_string(l.predicate());
    const auto& e = l.equality();
    return to_string(e.lhs) + (l.negated ? " != " : " = ") + to_string(e.rhs);
}

std::string to_string(const Rule& r) {
    std::string out = to_string(r.head) + " :-";
    if (r.body.empty()) return out + " .";
    for (std::size_t i = 0; i < r.body.size(); ++i) out += (i ? ", " : " ") + to_string(r.body[i]);
    return out + ".";
}

static std::string name_list(const std::set<std::string>& names) {
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
    return out;
}

std::string to_string(const Program& p) {
    std::string out;
    if (p.declared_inputs) out += "input " + name_list(*p.declared_inputs) + ".\n";
    if (p.declared_outputs) out += "output " + name_list(*p.declared_outputs) + ".\n";
    for (const auto& r : p.rules) out += to_string(r) + "\n";
    return out;
}

std::string to_string(const Consequent& c) {
    if (c.bottom) return "false";
    return to_string(c.lhs) + " = " + to_string(c.rhs);
}

std::string to_string(const Jaegd& j) {
    std::string out;
    for (const auto& p : j.body) out += (out.empty() ? "" : ", ") + to_string(p);
    for (const auto& e : j.equalities) out += (out.empty() ? "" : ", ") + to_string(e.lhs) + " = " + to_string(e.rhs);
    return out + " -> " + to_string(j.consequent) + ".";
}

} // namespace jlogic
