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

#include "jlogic/unify.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "jlogic/checks.hpp"
#include "jlogic/desugar.hpp"
#include "jlogic/errors.hpp"
#include "jlogic/eval.hpp"

namespace jlogic {

namespace {

class Fresh {
public:
    explicit Fresh(const std::set<Variable>& avoid) : avoid_(avoid) {}

    Variable make(VarSort sort) {
        for (;;) {
            Variable v{sort, "~" + std::to_string(++n_)};
            if (!avoid_.count(v)) return v;
        }
    }

private:
    const std::set<Variable>& avoid_;
    int n_ = 0;
};

PathItem item(const Variable& v) { return PathItem::make_var(v.sort, v.name); }

// A partial solution: bindings may mention continuation variables that
// are resolved once the whole equation is consumed.
struct State {
    Substitution bind;
    PathExpr unified;
};

// Copies a packed or atomic item with all its variables replaced by fresh
// ones, recording the bindings.
PathItem fresh_copy(const PathItem& it, Fresh& fresh, Substitution& bind) {
    if (it.is_var()) {
        Variable f = fresh.make(it.var.sort);
        bind[it.var] = {item(f)};
        return item(f);
    }
    if (it.is_packed()) {
        PathExpr inner;
        for (const auto& x : it.inner) inner.push_back(fresh_copy(x, fresh, bind));
        return PathItem::make_packed(std::move(inner));
    }
    return it;
}

void solve(PathExpr l, PathExpr r, State st, Fresh& fresh, std::vector<State>& out);

void solve_tail(const PathExpr& l, std::size_t li, const PathExpr& r, std::size_t ri, State st, Fresh& fresh,
                std::vector<State>& out) {
    solve(PathExpr(l.begin() + static_cast<std::ptrdiff_t>(li), l.end()), PathExpr(r.begin() + static_cast<std::ptrdiff_t>(ri), r.end()),
          std::move(st), fresh, out);
}

PathExpr with_head(const PathItem& h, const PathExpr& e, std::size_t from) {
    PathExpr out{h};
    out.insert(out.end(), e.begin() + static_cast<std::ptrdiff_t>(from), e.end());
    return out;
}

void solve(PathExpr l, PathExpr r, State st, Fresh& fresh, std::vector<State>& out) {
    if (l.empty() || r.empty()) {
        if (l.empty() && r.empty()) out.push_back(std::move(st));
        return;
    }
    // Normalize so that a path variable, if any, is on the left.
    if (!l[0].is_var(VarSort::Path) && r[0].is_var(VarSort::Path)) std::swap(l, r);
    const PathItem a = l[0], b = r[0];

    if (!a.is_var(VarSort::Path)) {
        // Neither head is a path variable: the two heads are one key each.
        if (a.is_constant() && b.is_constant()) {
            if (a.constant != b.constant) return;
            st.unified.push_back(a);
        } else if (a.is_var(VarSort::Atomic) && b.is_var(VarSort::Atomic)) {
            Variable f = fresh.make(VarSort::Atomic);
            st.bind[a.var] = {item(f)};
            st.bind[b.var] = {item(f)};
            st.unified.push_back(item(f));
        } else if (a.is_var(VarSort::Atomic) || b.is_var(VarSort::Atomic)) {
            const PathItem& v = a.is_var(VarSort::Atomic) ? a : b;
            const PathItem& c = a.is_var(VarSort::Atomic) ? b : a;
            if (!c.is_constant() || c.constant.is_packed()) return;
            st.bind[v.var] = {c};
            st.unified.push_back(c);
        } else if (a.is_packed() && b.is_packed()) {
            std::vector<State> inner;
            solve(a.inner, b.inner, State{st.bind, {}}, fresh, inner);
            for (auto& s : inner) {
                State next{std::move(s.bind), st.unified};
                next.unified.push_back(PathItem::make_packed(std::move(s.unified)));
                solve_tail(l, 1, r, 1, std::move(next), fresh, out);
            }
            return;
        } else {
            return;
        }
        solve_tail(l, 1, r, 1, std::move(st), fresh, out);
        return;
    }

    if (!b.is_var(VarSort::Path)) {
        // $x against a single key: either $x is exactly that key or it
        // continues past it.
        {
            State s = st;
            PathItem k = fresh_copy(b, fresh, s.bind);
            s.bind[a.var] = {k};
            s.unified.push_back(k);
            solve_tail(l, 1, r, 1, std::move(s), fresh, out);
        }
        {
            State s = st;
            PathItem k = fresh_copy(b, fresh, s.bind);
            Variable cont = fresh.make(VarSort::Path);
            s.bind[a.var] = {k, item(cont)};
            s.unified.push_back(k);
            solve(with_head(item(cont), l, 1), PathExpr(r.begin() + 1, r.end()), std::move(s), fresh, out);
        }
        return;
    }

    // Two path variables: equal length, left shorter, or right shorter.
    {
        State s = st;
        Variable f = fresh.make(VarSort::Path);
        s.bind[a.var] = {item(f)};
        s.bind[b.var] = {item(f)};
        s.unified.push_back(item(f));
        solve_tail(l, 1, r, 1, std::move(s), fresh, out);
    }
    for (int side = 0; side < 2; ++side) {
        const PathItem& shorter = side == 0 ? a : b;
        const PathItem& longer = side == 0 ? b : a;
        State s = st;
        Variable f = fresh.make(VarSort::Path);
        Variable cont = fresh.make(VarSort::Path);
        s.bind[shorter.var] = {item(f)};
        s.bind[longer.var] = {item(f), item(cont)};
        s.unified.push_back(item(f));
        if (side == 0) solve(PathExpr(l.begin() + 1, l.end()), with_head(item(cont), r, 1), std::move(s), fresh, out);
        else solve(with_head(item(cont), l, 1), PathExpr(r.begin() + 1, r.end()), std::move(s), fresh, out);
    }
}

// Applies bindings until only unbound (final) variables remain.
PathExpr resolve(const PathExpr& e, const Substitution& bind) {
    PathExpr out;
    for (const auto& it : e) {
        if (it.is_var()) {
            auto f = bind.find(it.var);
            if (f == bind.end()) {
                out.push_back(it);
            } else {
                PathExpr sub = resolve(f->second, bind);
                out.insert(out.end(), sub.begin(), sub.end());
            }
        } else if (it.is_packed()) {
            out.push_back(PathItem::make_packed(resolve(it.inner, bind)));
        } else {
            out.push_back(it);
        }
    }
    return out;
}

// Renames the fresh variables of a unifier by first occurrence in the
// unified expression.
Unifier canonical(const Unifier& u, const std::set<Variable>& avoid) {
    std::vector<Variable> order;
    std::function<void(const PathExpr&)> scan = [&](const PathExpr& e) {
        for (const auto& it : e) {
            if (it.is_var() && std::find(order.begin(), order.end(), it.var) == order.end()) order.push_back(it.var);
            if (it.is_packed()) scan(it.inner);
        }
    };
    scan(u.unified);
    std::string prefix = "_";
    auto clashes = [&] {
        for (const auto& v : avoid)
            if (v.name.rfind(prefix, 0) == 0 && v.name.size() > prefix.size() &&
                std::all_of(v.name.begin() + static_cast<std::ptrdiff_t>(prefix.size()), v.name.end(), ::isdigit))
                return true;
        return false;
    };
    while (clashes()) prefix += "_";
    Substitution ren;
    for (std::size_t i = 0; i < order.size(); ++i) ren[order[i]] = {PathItem::make_var(order[i].sort, prefix + std::to_string(i + 1))};
    Unifier out;
    out.unified = substitute(ren, u.unified);
    for (const auto& [v, e] : u.mapping) out.mapping[v] = substitute(ren, e);
    return out;
}

bool linear(const PathExpr& e1, const PathExpr& e2) {
    std::set<Variable> vs = vars_of(e1);
    for (const auto& v : vars_of(e2)) vs.insert(v);
    for (const auto& v : vs)
        if (count_occurrences(e1, v) + count_occurrences(e2, v) > 1) return false;
    return true;
}

std::vector<Unifier> by_matching(const PathExpr& pattern, const PathExpr& ground) {
    Path target = to_path(ground);
    Predicate p{"E", pattern, AtomicTerm::empty_object()};
    std::vector<Unifier> out;
    for (const auto& val : match_predicate(p, Fact{"E", target, AtomicValue::empty_object()})) {
        Unifier u;
        for (const auto& [v, path] : val) u.mapping[v] = to_expr(path);
        u.unified = ground;
        out.push_back(std::move(u));
    }
    return out;
}

} // namespace

std::string to_string(const Unifier& u) {
    std::string out = "{";
    for (const auto& [v, e] : u.mapping) {
        if (out.size() > 1) out += ", ";
        out += to_string(v) + " -> " + to_string(e);
    }
    return out + "} : " + to_string(u.unified);
}

std::vector<Unifier> enumerate_mgus(const PathExpr& e1, const PathExpr& e2, const std::set<Variable>& avoid) {
    if (is_ground(e1) && is_ground(e2)) {
        if (to_path(e1) != to_path(e2)) return {};
        return {Unifier{{}, e1}};
    }
    if (is_ground(e2)) return by_matching(e1, e2);
    if (is_ground(e1)) return by_matching(e2, e1);
    if (!linear(e1, e2)) throw CyclicEquality("cannot unify " + to_string(e1) + " = " + to_string(e2) + ": a variable occurs twice");

    std::set<Variable> all = avoid;
    for (const auto& v : vars_of(e1)) all.insert(v);
    for (const auto& v : vars_of(e2)) all.insert(v);
    Fresh fresh(all);
    std::vector<State> states;
    solve(e1, e2, State{}, fresh, states);

    std::vector<Unifier> out;
    for (const auto& st : states) {
        Unifier u;
        u.unified = st.unified;
        for (const auto& v : vars_of(e1)) u.mapping[v] = resolve({item(v)}, st.bind);
        for (const auto& v : vars_of(e2)) u.mapping[v] = resolve({item(v)}, st.bind);
        Unifier c = canonical(u, all);
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
    return out;
}

namespace {

// Removes equalities one at a time; `apply` rebuilds the construct under a
// unifier and `equalities` lists the positive ones still present.
template <class T>
void eliminate(const T& x, const std::function<std::vector<Equality>(const T&)>& equalities,
               const std::function<T(const T&, std::size_t, const Substitution&)>& apply, const std::function<std::set<Variable>(const T&)>& vars,
               std::vector<T>& out, int depth) {
    if (depth > 256) throw CyclicEquality("equality elimination does not terminate");
    auto eqs = equalities(x);
    if (eqs.empty()) {
        out.push_back(x);
        return;
    }
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        std::vector<Unifier> us;
        try {
            us = enumerate_mgus(eqs[i].lhs, eqs[i].rhs, vars(x));
        } catch (const CyclicEquality&) {
            continue;
        }
        for (const auto& u : us) eliminate(apply(x, i, u.mapping), equalities, apply, vars, out, depth + 1);
        return;
    }
    throw CyclicEquality("no equality can be solved");
}

std::vector<std::size_t> equality_positions(const Rule& r) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < r.body.size(); ++i)
        if (!r.body[i].negated && r.body[i].is_equality()) pos.push_back(i);
    return pos;
}

} // namespace

std::vector<Rule> eliminate_equalities(const Rule& r, bool require_acyclic) {
    if (has_sugar(r)) {
        std::vector<Rule> out;
        for (const auto& c : desugar(r)) {
            auto part = eliminate_equalities(c, require_acyclic);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    if (require_acyclic && !is_equationally_acyclic(r)) throw CyclicEquality("rule is equationally cyclic: " + to_string(r));
    std::vector<Rule> out;
    eliminate<Rule>(
        r,
        [](const Rule& x) {
            std::vector<Equality> eqs;
            for (auto i : equality_positions(x)) eqs.push_back(x.body[i].equality());
            return eqs;
        },
        [](const Rule& x, std::size_t k, const Substitution& s) {
            Rule y = x;
            y.body.erase(y.body.begin() + static_cast<std::ptrdiff_t>(equality_positions(x)[k]));
            y = substitute(s, y);
            // Equalities made trivial are dropped.
            std::vector<Literal> body;
            for (auto& l : y.body) {
                if (!l.negated && l.is_equality() && l.equality().lhs == l.equality().rhs) continue;
                if (std::find(body.begin(), body.end(), l) == body.end()) body.push_back(std::move(l));
            }
            y.body = std::move(body);
            return y;
        },
        [](const Rule& x) { return vars_of(x); }, out, 0);
    return out;
}

std::vector<Jaegd> eliminate_equalities(const Jaegd& j, bool require_acyclic) {
    if (require_acyclic && equation_graph(j.equalities).is_cyclic()) throw CyclicEquality("dependency is equationally cyclic: " + to_string(j));
    std::vector<Jaegd> out;
    eliminate<Jaegd>(
        j, [](const Jaegd& x) { return x.equalities; },
        [](const Jaegd& x, std::size_t k, const Substitution& s) {
            Jaegd y = x;
            y.equalities.erase(y.equalities.begin() + static_cast<std::ptrdiff_t>(k));
            y = substitute(s, y);
            std::vector<Equality> eqs;
            for (auto& e : y.equalities)
                if (e.lhs != e.rhs) eqs.push_back(std::move(e));
            y.equalities = std::move(eqs);
            std::vector<Predicate> body;
            for (auto& p : y.body)
                if (std::find(body.begin(), body.end(), p) == body.end()) body.push_back(std::move(p));
            y.body = std::move(body);
            return y;
        },
        [](const Jaegd& x) { return vars_of(x); }, out, 0);
    return out;
}

Program eliminate_equalities(const Program& p) {
    Program out;
    out.declared_inputs = p.declared_inputs;
    out.declared_outputs = p.declared_outputs;
    for (const auto& r : p.rules) {
        auto rs = eliminate_equalities(r);
        out.rules.insert(out.rules.end(), rs.begin(), rs.end());
    }
    return out;
}

} // namespace jlogic
