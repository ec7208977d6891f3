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

#include "jlogic/desugar.hpp"

#include <algorithm>
#include <optional>

#include "jlogic/errors.hpp"

namespace jlogic {

namespace {

bool expr_has_sugar(const PathExpr& e) {
    for (const auto& it : e) {
        if (it.kind == PathItem::Kind::EmptyObject) return true;
        if (it.is_var() && it.var.sort != VarSort::Atomic && it.var.sort != VarSort::Path) return true;
        if (it.is_packed() && expr_has_sugar(it.inner)) return true;
    }
    return false;
}

bool pred_has_sugar(const Predicate& p) {
    return expr_has_sugar(p.path) || (p.value.is_var() && p.value.var.sort == VarSort::Value);
}

bool only_opt(const PathExpr& e) {
    return std::all_of(e.begin(), e.end(), [](const PathItem& it) { return it.is_var(VarSort::OptPath); });
}

void check_opt_usage(const PathExpr& e, const std::string& where) {
    if (!e.empty() && only_opt(e)) throw IllegalSugar("?-variables must be concatenated with other path expressions in " + where);
    for (const auto& it : e)
        if (it.is_packed()) check_opt_usage(it.inner, where);
}

std::string fresh_name(const std::set<Variable>& used, VarSort sort, const std::string& base) {
    if (!used.count(Variable{sort, base})) return base;
    for (int i = 1;; ++i) {
        std::string n = base + "_" + std::to_string(i);
        if (!used.count(Variable{sort, n})) return n;
    }
}

// Ordered list of sugar variables of a given sort, by first occurrence.
void sugar_vars(const PathExpr& e, VarSort sort, std::vector<Variable>& out) {
    for (const auto& it : e) {
        if (it.is_var(sort) && std::find(out.begin(), out.end(), it.var) == out.end()) out.push_back(it.var);
        if (it.is_packed()) sugar_vars(it.inner, sort, out);
    }
}

std::vector<Variable> sugar_vars(const Rule& r, VarSort sort) {
    std::vector<Variable> out;
    auto term = [&](const AtomicTerm& t) {
        if (t.is_var() && t.var.sort == sort && std::find(out.begin(), out.end(), t.var) == out.end()) out.push_back(t.var);
    };
    sugar_vars(r.head.path, sort, out);
    term(r.head.value);
    for (const auto& l : r.body) {
        if (l.is_predicate()) {
            sugar_vars(l.predicate().path, sort, out);
            term(l.predicate().value);
        } else {
            sugar_vars(l.equality().lhs, sort, out);
            sugar_vars(l.equality().rhs, sort, out);
        }
    }
    return out;
}

PathExpr replace_in(const PathExpr& e, const Variable& v, const std::optional<PathItem>& with) {
    PathExpr out;
    for (const auto& it : e) {
        if (it.is_var() && it.var == v) {
            if (with) out.push_back(*with);
        } else if (it.is_packed()) {
            out.push_back(PathItem::make_packed(replace_in(it.inner, v, with)));
        } else {
            out.push_back(it);
        }
    }
    return out;
}

// Replaces v everywhere; `with` empty means deletion. The value slot
// receives `term` when v occurs there.
Rule replace(const Rule& r, const Variable& v, const std::optional<PathItem>& with, const AtomicTerm& term) {
    auto pred = [&](const Predicate& p) {
        Predicate q{p.relation, replace_in(p.path, v, with), p.value};
        if (p.value.is_var() && p.value.var == v) q.value = term;
        return q;
    };
    Rule out;
    out.span = r.span;
    out.head = pred(r.head);
    for (const auto& l : r.body) {
        Literal m = l;
        if (l.is_predicate()) m.atom = pred(l.predicate());
        else m.atom = Equality{replace_in(l.equality().lhs, v, with), replace_in(l.equality().rhs, v, with)};
        out.body.push_back(std::move(m));
    }
    return out;
}

bool is_empty_side(const PathExpr& e) { return e.size() == 1 && e[0].kind == PathItem::Kind::EmptyObject; }

// Resolves equalities that became decidable: a side that is {} or the empty
// sequence. Returns nullopt when the copy can never fire.
std::optional<Rule> resolve(Rule r) {
    std::vector<Literal> body;
    for (auto& l : r.body) {
        if (l.is_equality()) {
            const auto& e = l.equality();
            std::optional<bool> truth;
            if (e.lhs.empty() || e.rhs.empty()) truth = e.lhs.empty() && e.rhs.empty();
            else if (is_empty_side(e.lhs) || is_empty_side(e.rhs)) truth = is_empty_side(e.lhs) && is_empty_side(e.rhs);
            if (truth) {
                if (*truth == l.negated) return std::nullopt;
                continue;
            }
        }
        body.push_back(std::move(l));
    }
    r.body = std::move(body);
    return r;
}

} // namespace

bool has_sugar(const Rule& r) {
    if (pred_has_sugar(r.head)) return true;
    for (const auto& l : r.body) {
        if (l.is_predicate() ? pred_has_sugar(l.predicate()) : (expr_has_sugar(l.equality().lhs) || expr_has_sugar(l.equality().rhs)))
            return true;
    }
    return false;
}

bool has_sugar(const Program& p) {
    return std::any_of(p.rules.begin(), p.rules.end(), [](const Rule& r) { return has_sugar(r); });
}

std::vector<Rule> desugar(const Rule& r) {
    check_opt_usage(r.head.path, "the head");
    for (const auto& l : r.body) {
        if (l.is_predicate()) {
            check_opt_usage(l.predicate().path, "a predicate");
        } else {
            const auto& e = l.equality();
            if (only_opt(e.lhs) && only_opt(e.rhs)) throw IllegalSugar("an equality between ?-variables only");
            for (const auto& side : {e.lhs, e.rhs})
                for (const auto& it : side)
                    if (it.is_packed()) check_opt_usage(it.inner, "a packed expression");
        }
    }
    if (r.head.path.size() == 1 && r.head.path[0].kind == PathItem::Kind::EmptyObject) throw IllegalSugar("{} used as a path");

    std::vector<Rule> work{r};
    for (VarSort sort : {VarSort::Value, VarSort::OptPath, VarSort::AnyKey}) {
        std::vector<Rule> next;
        for (const auto& rule : work) {
            std::vector<Rule> cur{rule};
            for (const auto& v : sugar_vars(rule, sort)) {
                std::vector<Rule> expanded;
                for (const auto& c : cur) {
                    auto used = vars_of(c);
                    switch (sort) {
                    case VarSort::Value: {
                        std::string n = fresh_name(used, VarSort::Atomic, v.name);
                        expanded.push_back(replace(c, v, PathItem::make_var(VarSort::Atomic, n), AtomicTerm::make_var(VarSort::Atomic, n)));
                        expanded.push_back(replace(c, v, PathItem::make_empty_object(), AtomicTerm::empty_object()));
                        break;
                    }
                    case VarSort::OptPath: {
                        std::string n = fresh_name(used, VarSort::Path, v.name);
                        expanded.push_back(replace(c, v, PathItem::make_var(VarSort::Path, n), {}));
                        expanded.push_back(replace(c, v, std::nullopt, {}));
                        break;
                    }
                    default: {
                        std::string a = fresh_name(used, VarSort::Atomic, v.name);
                        std::string p = fresh_name(used, VarSort::Path, v.name);
                        expanded.push_back(replace(c, v, PathItem::make_var(VarSort::Atomic, a), {}));
                        expanded.push_back(replace(c, v, PathItem::make_packed({PathItem::make_var(VarSort::Path, p)}), {}));
                        break;
                    }
                    }
                }
                cur.clear();
                for (auto& c : expanded)
                    if (auto res = resolve(std::move(c))) cur.push_back(std::move(*res));
            }
            next.insert(next.end(), cur.begin(), cur.end());
        }
        work = std::move(next);
    }
    for (auto& c : work) {
        auto res = resolve(c);
        if (!res) continue;
        if (res->head.path.empty()) throw IllegalSugar("head path became empty");
        for (const auto& l : res->body)
            if (l.is_predicate() && l.predicate().path.empty()) throw IllegalSugar("predicate path became empty");
    }
    std::vector<Rule> out;
    for (auto& c : work)
        if (auto res = resolve(std::move(c))) out.push_back(std::move(*res));
    return out;
}

Program desugar(const Program& p) {
    Program out;
    out.declared_inputs = p.declared_inputs;
    out.declared_outputs = p.declared_outputs;
    for (const auto& r : p.rules) {
        auto rs = desugar(r);
        out.rules.insert(out.rules.end(), rs.begin(), rs.end());
    }
    return out;
}

} // namespace jlogic
