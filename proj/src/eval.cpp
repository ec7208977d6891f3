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

#include "jlogic/eval.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "jlogic/checks.hpp"
#include "jlogic/desugar.hpp"
#include "jlogic/errors.hpp"

namespace jlogic {

namespace {

// Non-owning callable reference; avoids std::function allocations in the
// matcher's continuation chain.
class FnRef {
public:
    template <class F>
    FnRef(F& f) : obj_(&f), call_([](void* o) { (*static_cast<F*>(o))(); }) {}
    void operator()() const { call_(obj_); }

private:
    void* obj_;
    void (*call_)(void*);
};

struct CItem {
    enum Kind { Const, AVar, PVar, Packed } kind = Const;
    Key c;
    int var = -1;
    std::vector<CItem> inner;
};

struct CTerm {
    enum Kind { Empty, Const, Var } kind = Empty;
    Key c;
    int var = -1;
};

struct CPred {
    std::string rel;
    std::vector<CItem> path;
    CTerm value;
};

struct CEq {
    std::vector<CItem> lhs, rhs;
};

class VarTable {
public:
    int get(const Variable& v) {
        auto [it, fresh] = idx_.emplace(v, static_cast<int>(vars_.size()));
        if (fresh) vars_.push_back(v);
        return it->second;
    }
    int find(const Variable& v) const {
        auto it = idx_.find(v);
        return it == idx_.end() ? -1 : it->second;
    }
    const std::vector<Variable>& vars() const { return vars_; }

private:
    std::map<Variable, int> idx_;
    std::vector<Variable> vars_;
};

std::vector<CItem> compile(const PathExpr& e, VarTable& vt) {
    std::vector<CItem> out;
    out.reserve(e.size());
    for (const auto& it : e) {
        CItem c;
        switch (it.kind) {
        case PathItem::Kind::Constant:
            if (it.constant.is_packed()) {
                c.kind = CItem::Packed;
                c.inner = compile(to_expr(it.constant.inner()), vt);
            } else {
                c.kind = CItem::Const;
                c.c = it.constant;
            }
            break;
        case PathItem::Kind::Var:
            if (it.var.sort == VarSort::Atomic) c.kind = CItem::AVar;
            else if (it.var.sort == VarSort::Path) c.kind = CItem::PVar;
            else throw Error("sugar variable in core rule: " + to_string(it.var));
            c.var = vt.get(it.var);
            break;
        case PathItem::Kind::Packed:
            c.kind = CItem::Packed;
            c.inner = compile(it.inner, vt);
            break;
        case PathItem::Kind::EmptyObject:
            throw Error("{} used as a path");
        }
        out.push_back(std::move(c));
    }
    return out;
}

CTerm compile(const AtomicTerm& t, VarTable& vt) {
    CTerm c;
    if (t.is_constant()) {
        c.kind = CTerm::Const;
        c.c = t.constant;
    } else if (t.is_var()) {
        if (t.var.sort != VarSort::Atomic) throw Error("sugar variable in core rule: " + to_string(t.var));
        c.kind = CTerm::Var;
        c.var = vt.get(t.var);
    }
    return c;
}

CPred compile(const Predicate& p, VarTable& vt) { return CPred{p.relation, compile(p.path, vt), compile(p.value, vt)}; }

void item_vars(const std::vector<CItem>& items, std::vector<int>& out) {
    for (const auto& it : items) {
        if (it.var >= 0) out.push_back(it.var);
        item_vars(it.inner, out);
    }
}

std::vector<int> vars_of(const CPred& p) {
    std::vector<int> out;
    item_vars(p.path, out);
    if (p.value.var >= 0) out.push_back(p.value.var);
    return out;
}

std::vector<int> vars_of(const std::vector<CItem>& e) {
    std::vector<int> out;
    item_vars(e, out);
    return out;
}

struct Env {
    std::vector<std::span<const Key>> val;
    std::vector<char> bound;
    const std::function<bool(Key)>* atomic_ok = nullptr;
    bool stop = false;
};

void match_items(const CItem* it, const CItem* end, std::span<const Key> path, std::size_t pos, Env& env, FnRef k) {
    if (env.stop) return;
    std::size_t left = path.size() - pos;
    std::size_t items = static_cast<std::size_t>(end - it);
    if (items == 0) {
        if (left == 0) k();
        return;
    }
    if (left < items) return;
    const Key key = path[pos];
    switch (it->kind) {
    case CItem::Const:
        if (key == it->c) match_items(it + 1, end, path, pos + 1, env, k);
        return;
    case CItem::AVar: {
        if (!key.is_atomic()) return;
        int v = it->var;
        if (env.bound[v]) {
            if (env.val[v][0] == key) match_items(it + 1, end, path, pos + 1, env, k);
            return;
        }
        if (env.atomic_ok && !(*env.atomic_ok)(key)) return;
        env.val[v] = path.subspan(pos, 1);
        env.bound[v] = 1;
        match_items(it + 1, end, path, pos + 1, env, k);
        env.bound[v] = 0;
        return;
    }
    case CItem::PVar: {
        int v = it->var;
        if (env.bound[v]) {
            auto b = env.val[v];
            if (b.size() <= left && std::equal(b.begin(), b.end(), path.begin() + static_cast<std::ptrdiff_t>(pos)))
                match_items(it + 1, end, path, pos + b.size(), env, k);
            return;
        }
        std::size_t maxlen = left - (items - 1);
        env.bound[v] = 1;
        for (std::size_t len = 1; len <= maxlen && !env.stop; ++len) {
            env.val[v] = path.subspan(pos, len);
            match_items(it + 1, end, path, pos + len, env, k);
        }
        env.bound[v] = 0;
        return;
    }
    case CItem::Packed: {
        if (!key.is_packed()) return;
        auto rest = [&] { match_items(it + 1, end, path, pos + 1, env, k); };
        match_items(it->inner.data(), it->inner.data() + it->inner.size(), key.inner(), 0, env, FnRef(rest));
        return;
    }
    }
}

void match_path(const std::vector<CItem>& items, std::span<const Key> path, Env& env, FnRef k) {
    match_items(items.data(), items.data() + items.size(), path, 0, env, k);
}

// Matches the value slot; returns the variable it bound, -1 if none, -2 on failure.
int match_term(const CTerm& t, const AtomicValue& v, Env& env) {
    switch (t.kind) {
    case CTerm::Empty: return v.is_empty_object() ? -1 : -2;
    case CTerm::Const: return !v.is_empty_object() && v.key() == t.c ? -1 : -2;
    case CTerm::Var:
        if (v.is_empty_object()) return -2;
        if (env.bound[t.var]) return env.val[t.var][0] == v.key() ? -1 : -2;
        if (env.atomic_ok && !(*env.atomic_ok)(v.key())) return -2;
        env.val[t.var] = std::span<const Key>(&v.key(), 1);
        env.bound[t.var] = 1;
        return t.var;
    }
    return -2;
}

bool is_ground(const std::vector<CItem>& items, const Env& env) {
    for (const auto& it : items) {
        if (it.var >= 0 && !env.bound[it.var]) return false;
        if (it.kind == CItem::Packed && !is_ground(it.inner, env)) return false;
    }
    return true;
}

void instantiate(const std::vector<CItem>& items, const Env& env, Path& out) {
    for (const auto& it : items) {
        switch (it.kind) {
        case CItem::Const: out.push_back(it.c); break;
        case CItem::AVar:
        case CItem::PVar: {
            auto b = env.val[it.var];
            out.insert(out.end(), b.begin(), b.end());
            break;
        }
        case CItem::Packed: {
            Path inner;
            instantiate(it.inner, env, inner);
            out.push_back(Key::packed(inner));
            break;
        }
        }
    }
}

AtomicValue instantiate(const CTerm& t, const Env& env) {
    switch (t.kind) {
    case CTerm::Empty: return AtomicValue::empty_object();
    case CTerm::Const: return AtomicValue::of(t.c);
    case CTerm::Var: return AtomicValue::of(env.val[t.var][0]);
    }
    return AtomicValue::empty_object();
}

// Longest ground prefix of a pattern, usable as a range scan key.
void ground_prefix(const std::vector<CItem>& items, const Env& env, Path& out) {
    for (const auto& it : items) {
        if (it.kind == CItem::Const) {
            out.push_back(it.c);
        } else if (it.kind == CItem::Packed) {
            if (!is_ground(it.inner, env)) return;
            Path inner;
            instantiate(it.inner, env, inner);
            out.push_back(Key::packed(inner));
        } else if (env.bound[it.var]) {
            auto b = env.val[it.var];
            out.insert(out.end(), b.begin(), b.end());
        } else {
            return;
        }
    }
}

const AtomicValue& min_value() {
    static const AtomicValue v = AtomicValue::of(Key());
    return v;
}

struct Step {
    enum Kind { Pos, EqMatch, EqCompare, NegPred, NegEq } kind;
    int index;
    bool lhs_ground = true;
};

/// A compiled conjunctive body with an evaluation plan.
class Body {
public:
    Body(const std::vector<Literal>& body, VarTable& vt) {
        for (const auto& l : body) {
            if (l.is_predicate()) {
                (l.negated ? neg_ : pos_).push_back(compile(l.predicate(), vt));
            } else {
                CEq e{compile(l.equality().lhs, vt), compile(l.equality().rhs, vt)};
                (l.negated ? neq_ : eq_).push_back(std::move(e));
            }
        }
    }

    const std::vector<CPred>& positives() const { return pos_; }

    /// Orders the body; `first` (if >= 0) is scanned first.
    std::vector<Step> plan(int first, std::size_t nvars) const {
        std::vector<Step> steps;
        std::vector<char> bound(nvars, 0);
        std::vector<char> pos_done(pos_.size(), 0), eq_done(eq_.size(), 0), neg_done(neg_.size(), 0), neq_done(neq_.size(), 0);
        auto all_bound = [&](const std::vector<int>& vs) {
            return std::all_of(vs.begin(), vs.end(), [&](int v) { return bound[v] != 0; });
        };
        auto mark = [&](const std::vector<int>& vs) {
            for (int v : vs) bound[v] = 1;
        };
        auto settle = [&] {
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t i = 0; i < eq_.size(); ++i) {
                    if (eq_done[i]) continue;
                    auto lv = vars_of(eq_[i].lhs), rv = vars_of(eq_[i].rhs);
                    bool lg = all_bound(lv), rg = all_bound(rv);
                    if (!lg && !rg) continue;
                    eq_done[i] = 1;
                    changed = true;
                    if (lg && rg) steps.push_back({Step::EqCompare, static_cast<int>(i)});
                    else steps.push_back({Step::EqMatch, static_cast<int>(i), lg});
                    mark(lv);
                    mark(rv);
                }
            }
            for (std::size_t i = 0; i < neg_.size(); ++i)
                if (!neg_done[i] && all_bound(vars_of(neg_[i]))) {
                    neg_done[i] = 1;
                    steps.push_back({Step::NegPred, static_cast<int>(i)});
                }
            for (std::size_t i = 0; i < neq_.size(); ++i) {
                if (neq_done[i]) continue;
                auto vs = vars_of(neq_[i].lhs);
                auto rv = vars_of(neq_[i].rhs);
                vs.insert(vs.end(), rv.begin(), rv.end());
                if (all_bound(vs)) {
                    neq_done[i] = 1;
                    steps.push_back({Step::NegEq, static_cast<int>(i)});
                }
            }
        };
        settle();
        if (first >= 0) {
            pos_done[first] = 1;
            steps.push_back({Step::Pos, first});
            mark(vars_of(pos_[first]));
            settle();
        }
        for (;;) {
            // Greedy: prefer predicates with a bound or constant first item,
            // then the most bound variables; body order breaks ties.
            int best = -1;
            std::pair<int, int> best_score{-1, -1};
            for (std::size_t i = 0; i < pos_.size(); ++i) {
                if (pos_done[i]) continue;
                const auto& p = pos_[i].path;
                int anchored = !p.empty() && (p[0].kind == CItem::Const || (p[0].var >= 0 && bound[p[0].var])) ? 1 : 0;
                int nb = 0;
                for (int v : vars_of(pos_[i])) nb += bound[v];
                std::pair<int, int> score{anchored, nb};
                if (score > best_score) {
                    best_score = score;
                    best = static_cast<int>(i);
                }
            }
            if (best < 0) break;
            pos_done[best] = 1;
            steps.push_back({Step::Pos, best});
            mark(vars_of(pos_[best]));
            settle();
        }
        for (std::size_t i = 0; i < eq_.size(); ++i)
            if (!eq_done[i]) throw StaticError("equality with no limited side; the rule is unsafe");
        if (std::find(neg_done.begin(), neg_done.end(), 0) != neg_done.end() ||
            std::find(neq_done.begin(), neq_done.end(), 0) != neq_done.end())
            throw StaticError("negative literal with unlimited variables; the rule is unsafe");
        return steps;
    }

    /// Runs the plan; sources[i] is the description scanned for positive i.
    void run(const std::vector<Step>& steps, std::size_t at, const std::vector<const ObjectDescription*>& sources, const Instance& db,
             Env& env, FnRef emit) const {
        if (env.stop) return;
        if (at == steps.size()) {
            emit();
            return;
        }
        const Step& s = steps[at];
        auto next = [&] { run(steps, at + 1, sources, db, env, emit); };
        switch (s.kind) {
        case Step::Pos: {
            const CPred& p = pos_[s.index];
            const ObjectDescription& od = *sources[s.index];
            if (od.empty()) return;
            Path prefix;
            ground_prefix(p.path, env, prefix);
            auto scan = [&](const PathValue& pv) {
                int bv = match_term(p.value, pv.value, env);
                if (bv == -2) return;
                match_path(p.path, pv.path, env, FnRef(next));
                if (bv >= 0) env.bound[bv] = 0;
            };
            if (prefix.empty()) {
                for (const auto& pv : od) {
                    if (env.stop) break;
                    scan(pv);
                }
                return;
            }
            for (auto it = od.lower_bound(PathValue{prefix, min_value()}); it != od.end() && !env.stop; ++it) {
                const Path& fp = it->path;
                if (fp.size() < prefix.size() || !std::equal(prefix.begin(), prefix.end(), fp.begin())) break;
                scan(*it);
            }
            return;
        }
        case Step::EqMatch: {
            const CEq& e = eq_[s.index];
            Path g;
            instantiate(s.lhs_ground ? e.lhs : e.rhs, env, g);
            match_path(s.lhs_ground ? e.rhs : e.lhs, g, env, FnRef(next));
            return;
        }
        case Step::EqCompare: {
            const CEq& e = eq_[s.index];
            Path a, b;
            instantiate(e.lhs, env, a);
            instantiate(e.rhs, env, b);
            if (a == b) next();
            return;
        }
        case Step::NegPred: {
            const CPred& p = neg_[s.index];
            Path path;
            instantiate(p.path, env, path);
            if (!db.contains(p.rel, PathValue{std::move(path), instantiate(p.value, env)})) next();
            return;
        }
        case Step::NegEq: {
            const CEq& e = neq_[s.index];
            Path a, b;
            instantiate(e.lhs, env, a);
            instantiate(e.rhs, env, b);
            if (a != b) next();
            return;
        }
        }
    }

private:
    std::vector<CPred> pos_, neg_;
    std::vector<CEq> eq_, neq_;
};

void check_limits(const Path& p, const EvalLimits& limits) {
    if (p.size() > limits.max_path_length) throw LimitExceeded(LimitKind::PathLength);
    if (pack_depth(p) > limits.max_pack_depth) throw LimitExceeded(LimitKind::PackDepth);
}

/// A compiled rule.
class CompiledRule {
public:
    explicit CompiledRule(const Rule& r) : body_(r.body, vt_) {
        head_ = compile(r.head, vt_);
        nvars_ = vt_.vars().size();
    }

    const std::string& head_relation() const { return head_.rel; }
    const std::vector<CPred>& positives() const { return body_.positives(); }

    /// Derives head facts; scanning positive `delta_at` over delta (when >= 0).
    void fire(const Instance& db, const Instance* delta, int delta_at, const EvalLimits& limits, std::vector<PathValue>& out) {
        auto& steps = plan_for(delta_at);
        std::vector<const ObjectDescription*> sources;
        for (std::size_t i = 0; i < positives().size(); ++i) {
            const auto& rel = positives()[i].rel;
            sources.push_back(delta && static_cast<int>(i) == delta_at ? &delta->relation(rel) : &db.relation(rel));
        }
        Env env;
        env.val.resize(nvars_);
        env.bound.assign(nvars_, 0);
        auto emit = [&] {
            Path p;
            instantiate(head_.path, env, p);
            check_limits(p, limits);
            out.push_back(PathValue{std::move(p), instantiate(head_.value, env)});
        };
        body_.run(steps, 0, sources, db, env, FnRef(emit));
    }

private:
    const std::vector<Step>& plan_for(int first) {
        auto it = plans_.find(first);
        if (it == plans_.end()) it = plans_.emplace(first, body_.plan(first, vt_.vars().size())).first;
        return it->second;
    }

    VarTable vt_;
    Body body_;
    CPred head_;
    std::size_t nvars_ = 0;
    std::map<int, std::vector<Step>> plans_;
};

std::vector<Rule> core_rules(const Rule& r) { return has_sugar(r) ? desugar(r) : std::vector<Rule>{r}; }

} // namespace

std::string to_string(const Valuation& v) {
    std::string out = "{";
    for (const auto& [var, p] : v) {
        if (out.size() > 1) out += ", ";
        out += to_string(var) + "=" + to_string(p);
    }
    return out + "}";
}

EvalLimits EvalLimits::parse(const std::string& spec) {
    EvalLimits l;
    std::size_t start = 0;
    while (start < spec.size()) {
        std::size_t comma = spec.find(',', start);
        std::string part = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        start = comma == std::string::npos ? spec.size() : comma + 1;
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string::npos) throw Error("bad limit '" + part + "' (expected name=N)");
        std::string name = part.substr(0, eq), num = part.substr(eq + 1);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
        if (ec != std::errc() || ptr != num.data() + num.size() || value == 0) throw Error("bad limit value '" + num + "'");
        if (name == "facts") l.max_derived_facts = value;
        else if (name == "path") l.max_path_length = value;
        else if (name == "depth") l.max_pack_depth = value;
        else throw Error("unknown limit '" + name + "'");
    }
    return l;
}

std::vector<Valuation> match_predicate(const Predicate& pred, const Fact& fact, const Valuation& partial) {
    if (pred.relation != fact.relation) return {};
    VarTable vt;
    CPred p = compile(pred, vt);
    Env env;
    env.val.resize(vt.vars().size());
    env.bound.assign(vt.vars().size(), 0);
    for (const auto& [v, path] : partial) {
        int i = vt.find(v);
        if (i < 0) continue;
        env.val[i] = path;
        env.bound[i] = 1;
    }
    std::set<Valuation> found;
    auto emit = [&] {
        Valuation out = partial;
        for (std::size_t i = 0; i < vt.vars().size(); ++i)
            if (env.bound[i]) out[vt.vars()[i]] = Path(env.val[i].begin(), env.val[i].end());
        found.insert(std::move(out));
    };
    int bv = match_term(p.value, fact.value, env);
    if (bv == -2) return {};
    match_path(p.path, fact.path, env, FnRef(emit));
    return {found.begin(), found.end()};
}

std::set<Fact> eval_rule(const Rule& r, const Instance& i, const EvalLimits& limits) {
    std::set<Fact> out;
    for (const auto& core : core_rules(r)) {
        CompiledRule cr(core);
        std::vector<PathValue> derived;
        cr.fire(i, nullptr, -1, limits, derived);
        for (auto& pv : derived) out.insert(Fact{cr.head_relation(), std::move(pv.path), pv.value});
        if (out.size() > limits.max_derived_facts) throw LimitExceeded(LimitKind::DerivedFacts);
    }
    return out;
}

namespace {

Instance fixpoint(std::vector<CompiledRule>& rules, const Instance& input, const EvalOptions& opt, std::size_t& derived) {
    Instance db = input;
    std::set<std::string> heads;
    for (const auto& r : rules) heads.insert(r.head_relation());
    for (const auto& h : heads) db.declare(h);

    auto add_all = [&](std::vector<std::pair<std::string, PathValue>>& found, Instance& delta) {
        for (auto& [rel, pv] : found) {
            if (db.contains(rel, pv)) continue;
            delta.insert(rel, pv);
            db.insert(rel, std::move(pv));
            if (++derived > opt.limits.max_derived_facts) throw LimitExceeded(LimitKind::DerivedFacts);
        }
        found.clear();
    };

    std::vector<std::pair<std::string, PathValue>> found;
    std::vector<PathValue> buf;
    Instance delta;
    for (auto& r : rules) {
        r.fire(db, nullptr, -1, opt.limits, buf);
        for (auto& pv : buf) found.emplace_back(r.head_relation(), std::move(pv));
        buf.clear();
    }
    add_all(found, delta);

    while (delta.size() > 0) {
        Instance next;
        for (auto& r : rules) {
            if (opt.naive) {
                r.fire(db, nullptr, -1, opt.limits, buf);
            } else {
                const auto& ps = r.positives();
                for (std::size_t k = 0; k < ps.size(); ++k) {
                    if (!heads.count(ps[k].rel) || delta.relation(ps[k].rel).empty()) continue;
                    r.fire(db, &delta, static_cast<int>(k), opt.limits, buf);
                }
            }
            for (auto& pv : buf) found.emplace_back(r.head_relation(), std::move(pv));
            buf.clear();
        }
        add_all(found, next);
        delta = std::move(next);
    }
    return db;
}

} // namespace

Instance eval_semipositive(const std::vector<Rule>& stratum, const Instance& i, const EvalOptions& options) {
    std::vector<CompiledRule> rules;
    for (const auto& r : stratum)
        for (const auto& core : core_rules(r)) rules.emplace_back(core);
    std::size_t derived = 0;
    return fixpoint(rules, i, options, derived);
}

Instance eval_program(const Program& p0, const Instance& i, const EvalOptions& options) {
    Program p = has_sugar(p0) ? desugar(p0) : p0;
    check_program(p);
    auto idb = p.idb_names();
    for (const auto& [name, od] : i.relations()) {
        if (od.empty()) continue;
        if (idb.count(name)) throw VocabMismatch("input instance defines relation " + name + ", which the program derives");
        if (p.declared_inputs && !p.declared_inputs->count(name))
            throw VocabMismatch("input instance has relation " + name + ", which is not an input relation");
    }
    Strata strata = stratify(p);
    Instance db = i;
    std::size_t derived = 0;
    for (const auto& level : strata.rules) {
        std::vector<CompiledRule> rules;
        for (std::size_t idx : level) rules.emplace_back(p.rules[idx]);
        db = fixpoint(rules, db, options, derived);
    }
    for (const auto& n : idb) db.declare(n);
    return db;
}

Instance eval_query(const Program& p, const Instance& i, const EvalOptions& options) {
    Instance all = eval_program(p, i, options);
    Program core = has_sugar(p) ? desugar(p) : p;
    return all.restricted_to(core.vocab_out());
}

void for_each_valuation(const std::vector<Literal>& body, const Instance& db, const SearchOptions& options,
                        const std::function<bool(const Valuation&)>& callback) {
    VarTable vt;
    Body b(body, vt);
    auto steps = b.plan(-1, vt.vars().size());
    std::vector<const ObjectDescription*> sources;
    for (const auto& p : b.positives()) sources.push_back(&db.relation(p.rel));
    Env env;
    env.val.resize(vt.vars().size());
    env.bound.assign(vt.vars().size(), 0);
    if (options.atomic_ok) env.atomic_ok = &options.atomic_ok;
    auto emit = [&] {
        Valuation v;
        for (std::size_t k = 0; k < vt.vars().size(); ++k) v[vt.vars()[k]] = Path(env.val[k].begin(), env.val[k].end());
        if (!callback(v)) env.stop = true;
    };
    b.run(steps, 0, sources, db, env, FnRef(emit));
}

} // namespace jlogic
