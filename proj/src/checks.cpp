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

#include "jlogic/checks.hpp"

#include <algorithm>
#include <functional>

#include "jlogic/desugar.hpp"
#include "jlogic/errors.hpp"

namespace jlogic {

std::set<Variable> limited_variables(const Rule& r) {
    std::set<Variable> lim;
    for (const auto& l : r.body)
        if (!l.negated && l.is_predicate()) collect_vars(l.predicate(), lim);
    auto covered = [&](const PathExpr& e) {
        for (const auto& v : vars_of(e))
            if (!lim.count(v)) return false;
        return true;
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& l : r.body) {
            if (l.negated || !l.is_equality()) continue;
            const auto& e = l.equality();
            for (const auto* side : {&e.lhs, &e.rhs}) {
                const auto* other = side == &e.lhs ? &e.rhs : &e.lhs;
                if (!covered(*side)) continue;
                for (const auto& v : vars_of(*other)) changed |= lim.insert(v).second;
            }
        }
    }
    return lim;
}

SafetyReport check_safety(const Rule& r) {
    SafetyReport rep;
    auto lim = limited_variables(r);
    for (const auto& v : vars_of(r))
        if (!lim.count(v)) rep.unlimited.insert(v);
    rep.safe = rep.unlimited.empty();
    return rep;
}

Strata stratify(const Program& p) {
    auto idb = p.idb_names();
    std::map<std::string, std::size_t> level;
    for (const auto& n : idb) level[n] = 0;
    const std::size_t bound = idb.size();
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : p.rules) {
            std::size_t& h = level[r.head.relation];
            for (const auto& l : r.body) {
                if (!l.is_predicate() || !idb.count(l.predicate().relation)) continue;
                std::size_t need = level[l.predicate().relation] + (l.negated ? 1 : 0);
                if (need > h) {
                    if (need >= bound + 1) throw NotStratifiable("negation through recursion involving " + r.head.relation);
                    h = need;
                    changed = true;
                }
            }
        }
    }
    Strata s;
    s.level = level;
    std::size_t top = 0;
    for (const auto& [n, lv] : level) top = std::max(top, lv);
    if (p.rules.empty()) return s;
    s.rules.resize(top + 1);
    for (std::size_t i = 0; i < p.rules.size(); ++i) s.rules[level[p.rules[i].head.relation]].push_back(i);
    s.rules.erase(std::remove_if(s.rules.begin(), s.rules.end(), [](const auto& v) { return v.empty(); }), s.rules.end());
    return s;
}

bool is_recursive(const Program& p) {
    auto idb = p.idb_names();
    std::map<std::string, std::set<std::string>> deps;
    for (const auto& r : p.rules)
        for (const auto& l : r.body)
            if (l.is_predicate() && idb.count(l.predicate().relation)) deps[r.head.relation].insert(l.predicate().relation);
    // Colour-based DFS for a cycle.
    std::map<std::string, int> colour;
    std::function<bool(const std::string&)> dfs = [&](const std::string& n) {
        colour[n] = 1;
        for (const auto& m : deps[n]) {
            if (colour[m] == 1) return true;
            if (colour[m] == 0 && dfs(m)) return true;
        }
        colour[n] = 2;
        return false;
    };
    for (const auto& n : idb)
        if (colour[n] == 0 && dfs(n)) return true;
    return false;
}

bool is_positive(const Rule& r) {
    return std::none_of(r.body.begin(), r.body.end(), [](const Literal& l) { return l.negated; });
}

bool is_positive(const Program& p) {
    return std::all_of(p.rules.begin(), p.rules.end(), [](const Rule& r) { return is_positive(r); });
}

std::vector<Equality> positive_equalities(const Rule& r) {
    std::vector<Equality> out;
    for (const auto& l : r.body)
        if (!l.negated && l.is_equality() && std::find(out.begin(), out.end(), l.equality()) == out.end()) out.push_back(l.equality());
    return out;
}

std::size_t EquationGraph::multiplicity(const Variable& x, const Variable& y) const {
    auto it = edges.find(x <= y ? std::make_pair(x, y) : std::make_pair(y, x));
    return it == edges.end() ? 0 : it->second;
}

bool EquationGraph::is_cyclic() const {
    std::map<Variable, Variable> parent;
    for (const auto& n : nodes) parent.emplace(n, n);
    std::function<Variable(const Variable&)> find = [&](const Variable& v) -> Variable {
        Variable p = parent.at(v);
        if (p == v) return v;
        Variable root = find(p);
        parent[v] = root;
        return root;
    };
    for (const auto& [e, m] : edges) {
        if (m == 0) continue;
        if (e.first == e.second || m > 1) return true;
        Variable a = find(e.first), b = find(e.second);
        if (a == b) return true;
        parent[a] = b;
    }
    return false;
}

EquationGraph equation_graph(const std::vector<Equality>& equalities) {
    EquationGraph g;
    std::vector<Equality> distinct;
    for (const auto& e : equalities)
        if (std::find(distinct.begin(), distinct.end(), e) == distinct.end()) distinct.push_back(e);
    for (const auto& e : distinct) {
        auto vl = vars_of(e.lhs), vr = vars_of(e.rhs);
        g.nodes.insert(vl.begin(), vl.end());
        g.nodes.insert(vr.begin(), vr.end());
        std::set<Variable> all = vl;
        all.insert(vr.begin(), vr.end());
        for (const auto& x : all) {
            for (const auto& y : all) {
                if (y < x) continue;
                std::size_t m;
                if (x == y) m = count_occurrences(e.lhs, x) * count_occurrences(e.rhs, x);
                else m = count_occurrences(e.lhs, x) * count_occurrences(e.rhs, y) + count_occurrences(e.lhs, y) * count_occurrences(e.rhs, x);
                if (m) g.edges[{x, y}] += m;
            }
        }
    }
    return g;
}

EquationGraph equation_graph(const Rule& r) {
    EquationGraph g = equation_graph(positive_equalities(r));
    std::set<Variable> all;
    for (const auto& l : r.body) collect_vars(l, all);
    g.nodes.insert(all.begin(), all.end());
    return g;
}

bool is_equationally_acyclic(const Rule& r) { return !equation_graph(positive_equalities(r)).is_cyclic(); }

bool is_equationally_acyclic(const Program& p) {
    return std::all_of(p.rules.begin(), p.rules.end(), [](const Rule& r) { return is_equationally_acyclic(r); });
}

namespace {

std::string vocab_problem(const Program& p) {
    auto idb = p.idb_names();
    auto edb = p.edb_names();
    if (p.declared_inputs) {
        for (const auto& n : edb)
            if (!p.declared_inputs->count(n)) return "relation " + n + " is used but not declared as input";
        for (const auto& n : *p.declared_inputs)
            if (idb.count(n)) return "input relation " + n + " is defined by a rule";
    }
    if (p.declared_outputs)
        for (const auto& n : *p.declared_outputs)
            if (!idb.count(n)) return "output relation " + n + " is not defined by any rule";
    return {};
}

std::string names(const std::set<Variable>& vs) {
    std::string out;
    for (const auto& v : vs) out += (out.empty() ? "" : ", ") + to_string(v);
    return out;
}

} // namespace

void check_program(const Program& p) {
    for (const auto& r : p.rules) {
        if (has_sugar(r)) throw StaticError("rule is not desugared: " + to_string(r));
        auto rep = check_safety(r);
        if (!rep.safe) throw StaticError("unsafe rule (unlimited " + names(rep.unlimited) + "): " + to_string(r));
    }
    stratify(p);
    if (auto v = vocab_problem(p); !v.empty()) throw VocabMismatch(v);
}

ProgramDiagnostics diagnose(const Program& p) {
    ProgramDiagnostics d;
    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        auto rep = check_safety(p.rules[i]);
        if (!rep.safe) d.unsafe_rules.emplace_back(i, rep);
        if (!is_equationally_acyclic(p.rules[i])) d.cyclic_rules.push_back(i);
    }
    try {
        d.strata = stratify(p).rules.size();
    } catch (const NotStratifiable& e) {
        d.stratifiable = false;
        d.stratification_error = e.what();
    }
    d.recursive = is_recursive(p);
    d.vocab_error = vocab_problem(p);
    return d;
}

} // namespace jlogic
