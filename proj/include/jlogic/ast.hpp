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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "jlogic/key.hpp"

namespace jlogic {

/// Variable sorts. Atomic (@x) and path ($x) variables are core; value (%x),
/// optional-path (?x) and any-key (#x) variables are sugar removed by desugar().
enum class VarSort : std::uint8_t { Atomic, Path, Value, OptPath, AnyKey };

char sigil(VarSort sort);

struct Variable {
    VarSort sort = VarSort::Atomic;
    std::string name;

    friend bool operator==(const Variable&, const Variable&) = default;
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

std::string to_string(const Variable& v);

/// One item of a path expression.
struct PathItem {
    enum class Kind : std::uint8_t {
        Constant,
        Var,
        Packed,
        /// `{}` as the whole side of an equality; only before desugaring.
        EmptyObject,
    };

    Kind kind = Kind::Constant;
    Key constant;
    Variable var;
    std::vector<PathItem> inner;

    static PathItem make_constant(Key k) { return PathItem{Kind::Constant, k, {}, {}}; }
    static PathItem make_constant(std::string_view s) { return make_constant(Key::atom(s)); }
    static PathItem make_var(VarSort sort, std::string name) { return PathItem{Kind::Var, {}, Variable{sort, std::move(name)}, {}}; }
    static PathItem make_packed(std::vector<PathItem> inner) { return PathItem{Kind::Packed, {}, {}, std::move(inner)}; }
    static PathItem make_empty_object() { return PathItem{Kind::EmptyObject, {}, {}, {}}; }

    bool is_constant() const { return kind == Kind::Constant; }
    bool is_var() const { return kind == Kind::Var; }
    bool is_var(VarSort s) const { return kind == Kind::Var && var.sort == s; }
    bool is_packed() const { return kind == Kind::Packed; }

    friend bool operator==(const PathItem&, const PathItem&) = default;
    friend auto operator<=>(const PathItem& a, const PathItem& b)
    {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        if (auto c = a.constant <=> b.constant; c != 0) return c;
        if (auto c = a.var <=> b.var; c != 0) return c;
        return std::lexicographical_compare_three_way(a.inner.begin(), a.inner.end(), b.inner.begin(), b.inner.end());
    }
};

using PathExpr = std::vector<PathItem>;

/// The value slot of a predicate: an atomic value or an atomic/value variable.
struct AtomicTerm {
    enum class Kind : std::uint8_t { EmptyObject, Constant, Var };

    Kind kind = Kind::EmptyObject;
    Key constant;
    Variable var;

    static AtomicTerm empty_object() { return AtomicTerm{}; }
    static AtomicTerm make_constant(Key k) { return AtomicTerm{Kind::Constant, k, {}}; }
    static AtomicTerm make_constant(std::string_view s) { return make_constant(Key::atom(s)); }
    static AtomicTerm make_var(VarSort sort, std::string name) { return AtomicTerm{Kind::Var, {}, Variable{sort, std::move(name)}}; }

    bool is_empty_object() const { return kind == Kind::EmptyObject; }
    bool is_constant() const { return kind == Kind::Constant; }
    bool is_var() const { return kind == Kind::Var; }

    friend bool operator==(const AtomicTerm&, const AtomicTerm&) = default;
    friend auto operator<=>(const AtomicTerm&, const AtomicTerm&) = default;
};

struct Predicate {
    std::string relation;
    PathExpr path;
    AtomicTerm value;

    friend bool operator==(const Predicate&, const Predicate&) = default;
    friend auto operator<=>(const Predicate&, const Predicate&) = default;
};

struct Equality {
    PathExpr lhs;
    PathExpr rhs;

    friend bool operator==(const Equality&, const Equality&) = default;
    friend auto operator<=>(const Equality&, const Equality&) = default;
};

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Literal {
    bool negated = false;
    std::variant<Predicate, Equality> atom;
    SourceSpan span;

    bool is_predicate() const { return std::holds_alternative<Predicate>(atom); }
    bool is_equality() const { return std::holds_alternative<Equality>(atom); }
    const Predicate& predicate() const { return std::get<Predicate>(atom); }
    const Equality& equality() const { return std::get<Equality>(atom); }
    Predicate& predicate() { return std::get<Predicate>(atom); }
    Equality& equality() { return std::get<Equality>(atom); }

    static Literal positive(Predicate p) { return Literal{false, std::move(p), {}}; }
    static Literal negative(Predicate p) { return Literal{true, std::move(p), {}}; }
    static Literal equal(PathExpr a, PathExpr b) { return Literal{false, Equality{std::move(a), std::move(b)}, {}}; }
    static Literal not_equal(PathExpr a, PathExpr b) { return Literal{true, Equality{std::move(a), std::move(b)}, {}}; }

    friend bool operator==(const Literal& a, const Literal& b) { return a.negated == b.negated && a.atom == b.atom; }
};

struct Rule {
    Predicate head;
    std::vector<Literal> body;
    SourceSpan span;

    friend bool operator==(const Rule& a, const Rule& b) { return a.head == b.head && a.body == b.body; }
};

struct Program {
    std::vector<Rule> rules;
    /// Declared vocabularies; when absent they default to the EDB names and
    /// the IDB names respectively.
    std::optional<std::set<std::string>> declared_inputs;
    std::optional<std::set<std::string>> declared_outputs;

    std::set<std::string> idb_names() const;
    std::set<std::string> edb_names() const;
    std::set<std::string> vocab_in() const;
    std::set<std::string> vocab_out() const;
};

/// Consequent of a dependency: an atomic equality u = v, or bottom (a denial).
struct Consequent {
    bool bottom = false;
    AtomicTerm lhs;
    AtomicTerm rhs;

    static Consequent make_bottom() { return Consequent{true, {}, {}}; }
    static Consequent make_equal(AtomicTerm a, AtomicTerm b) { return Consequent{false, std::move(a), std::move(b)}; }

    /// u = u with identical sides.
    bool is_trivial() const { return !bottom && lhs == rhs; }

    friend bool operator==(const Consequent&, const Consequent&) = default;
};

/// An atomic equality-generating dependency body -> consequent. Bodies may
/// carry path equalities until equality elimination removes them.
struct Jaegd {
    std::vector<Predicate> body;
    std::vector<Equality> equalities;
    Consequent consequent;

    friend bool operator==(const Jaegd&, const Jaegd&) = default;
};

// ---------------------------------------------------------------------------
// Variables and substitution

void collect_vars(const PathExpr& e, std::set<Variable>& out);
void collect_vars(const AtomicTerm& t, std::set<Variable>& out);
void collect_vars(const Predicate& p, std::set<Variable>& out);
void collect_vars(const Literal& l, std::set<Variable>& out);
std::set<Variable> vars_of(const PathExpr& e);
std::set<Variable> vars_of(const Rule& r);
std::set<Variable> vars_of(const Jaegd& j);

/// Occurrences of v in e, including inside packed expressions.
std::size_t count_occurrences(const PathExpr& e, const Variable& v);

bool is_ground(const PathExpr& e);
bool has_packing(const PathExpr& e);

/// Converts a variable-free path expression to a path. Precondition: is_ground(e).
Path to_path(const PathExpr& e);
PathExpr to_expr(std::span<const Key> p);

/// A variable mapping: path variables to path expressions, atomic variables
/// to single-item expressions (a constant or an atomic variable). Applied
/// simultaneously.
using Substitution = std::map<Variable, PathExpr>;

PathExpr substitute(const Substitution& s, const PathExpr& e);
AtomicTerm substitute(const Substitution& s, const AtomicTerm& t);
Predicate substitute(const Substitution& s, const Predicate& p);
Literal substitute(const Substitution& s, const Literal& l);
Rule substitute(const Substitution& s, const Rule& r);
Consequent substitute(const Substitution& s, const Consequent& c);
Jaegd substitute(const Substitution& s, const Jaegd& j);

/// Renames every variable v to name + "_" + salt.
Rule rename_apart(const Rule& r, const std::string& salt);
Jaegd rename_apart(const Jaegd& j, const std::string& salt);

/// Constants occurring anywhere in the program.
std::set<std::string> constants_of(const Program& p);
std::set<std::string> constants_of(const Rule& r);

// ---------------------------------------------------------------------------
// Printing in the concrete grammar (parse(to_string(x)) round-trips).

std::string to_string(const PathItem& item);
std::string to_string(const PathExpr& e);
std::string to_string(const AtomicTerm& t);
std::string to_string(const Predicate& p);
std::string to_string(const Literal& l);
std::string to_string(const Rule& r);
std::string to_string(const Program& p);
std::string to_string(const Consequent& c);
std::string to_string(const Jaegd& j);

} // namespace jlogic
