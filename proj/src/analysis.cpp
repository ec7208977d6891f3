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

#include "jlogic/analysis.hpp"

#include <algorithm>
#include <functional>

#include "jlogic/checks.hpp"
#include "jlogic/desugar.hpp"
#include "jlogic/errors.hpp"
#include "jlogic/eval.hpp"
#include "jlogic/unify.hpp"

namespace jlogic {

namespace {

PathItem item_of(const AtomicTerm& t) {
    return t.is_constant() ? PathItem::make_constant(t.constant) : PathItem::make_var(t.var.sort, t.var.name);
}

std::vector<Rule> eliminate_or_unsupported(const Rule& r) {
    try {
        return eliminate_equalities(r, false);
    } catch (const CyclicEquality& e) {
        throw Unsupported(std::string("equality cannot be eliminated: ") + e.what());
    }
}

bool head_is_linear(const Rule& r) {
    std::set<Variable> vs;
    collect_vars(r.head, vs);
    for (const auto& v : vs) {
        std::size_t n = count_occurrences(r.head.path, v);
        if (r.head.value.is_var() && r.head.value.var == v) ++n;
        if (n > 1) return false;
    }
    return true;
}

std::vector<Predicate> predicates_of(const Rule& r) {
    std::vector<Predicate> out;
    for (const auto& l : r.body)
        if (l.is_predicate()) out.push_back(l.predicate());
    return out;
}

// Unifies body predicate k of r with the head of def (already renamed apart).
std::optional<Rule> inline_at(const Rule& r, std::size_t k, const Rule& def) {
    const Predicate& pred = r.body[k].predicate();
    const Predicate& head = def.head;
    if (pred.value.is_empty_object() != head.value.is_empty_object()) return std::nullopt;
    Substitution s;
    if (pred.value.is_var()) s[pred.value.var] = {item_of(head.value)};
    else if (head.value.is_var()) s[head.value.var] = {item_of(pred.value)};
    else if (pred.value != head.value) return std::nullopt;
    Rule n = r;
    n.body.erase(n.body.begin() + static_cast<std::ptrdiff_t>(k));
    n.body.insert(n.body.end(), def.body.begin(), def.body.end());
    n.body.push_back(Literal::equal(pred.path, head.path));
    return substitute(s, n);
}

} // namespace

std::vector<Rule> unfold(const Program& p, const std::set<std::string>& outputs) {
    Program d;
    try {
        d = desugar(p);
    } catch (const IllegalSugar& e) {
        throw Unsupported(e.what());
    }
    if (!is_positive(d)) throw Unsupported("the program uses negation");
    if (is_recursive(d)) throw Unsupported("the program is recursive");
    const auto idb = d.idb_names();
    std::map<std::string, std::vector<Rule>> memo;
    std::size_t salt = 0;

    std::function<const std::vector<Rule>&(const std::string&)> rules_for;
    std::function<void(const Rule&, std::vector<Rule>&)> expand = [&](const Rule& r, std::vector<Rule>& out) {
        for (std::size_t k = 0; k < r.body.size(); ++k) {
            const auto& l = r.body[k];
            if (!l.is_predicate() || !idb.count(l.predicate().relation)) continue;
            const auto& defs = rules_for(l.predicate().relation);
            for (const auto& def : defs) {
                auto n = inline_at(r, k, rename_apart(def, "u" + std::to_string(++salt)));
                if (!n) continue;
                for (const auto& x : eliminate_or_unsupported(*n)) expand(x, out);
            }
            return;
        }
        out.push_back(r);
    };
    rules_for = [&](const std::string& name) -> const std::vector<Rule>& {
        auto it = memo.find(name);
        if (it != memo.end()) return it->second;
        std::vector<Rule> out;
        for (const auto& r : d.rules)
            if (r.head.relation == name)
                for (const auto& x : eliminate_or_unsupported(r)) expand(x, out);
        return memo[name] = std::move(out);
    };
    std::vector<Rule> out;
    for (const auto& s : outputs) {
        const auto& rs = rules_for(s);
        out.insert(out.end(), rs.begin(), rs.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Object-object property

const char* to_string(ObjectObjectVerdict::Kind k) {
    switch (k) {
    case ObjectObjectVerdict::Kind::Yes: return "yes";
    case ObjectObjectVerdict::Kind::No: return "no";
    case ObjectObjectVerdict::Kind::Unsupported: return "unsupported";
    }
    return "unknown";
}

namespace {

// The dependency with equalities asking that the outputs of r1 and r2
// jointly satisfy the properness dependency `delta` (over relation D).
std::optional<Jaegd> combine(const Jaegd& delta, const Rule& r1, const Rule& r2) {
    const Predicate* heads[2] = {&r1.head, &r2.head};
    Substitution s;
    for (int k = 0; k < 2; ++k) {
        const AtomicTerm& want = delta.body[k].value;
        const AtomicTerm& have = heads[k]->value;
        if (want.is_empty_object() != have.is_empty_object()) return std::nullopt;
        if (want.is_var()) s[want.var] = {item_of(have)};
    }
    s[Variable{VarSort::Path, "x"}] = r1.head.path;
    Jaegd j;
    j.body = predicates_of(r1);
    for (const auto& p : predicates_of(r2))
        if (std::find(j.body.begin(), j.body.end(), p) == j.body.end()) j.body.push_back(p);
    j.equalities.push_back(Equality{substitute(s, delta.body[1].path), r2.head.path});
    j.consequent = substitute(s, delta.consequent);
    return j;
}

// Freezes the chased body into an instance over fresh constants. It is
// proper because the chase from the properness dependencies is complete.
void attach_counterexample(ObjectObjectVerdict& v, const Program& p, const Jaegd& chased, const std::set<std::string>& inputs,
                           const std::set<std::string>& outputs) {
    std::set<std::string> used = constants_of(p);
    std::map<Variable, Key> fresh;
    std::size_t next = 0;
    for (const auto& var : vars_of(chased)) {
        std::string s;
        do s = "k" + std::to_string(++next);
        while (used.count(s));
        fresh[var] = Key::atom(s);
    }
    Substitution sub;
    for (const auto& [var, k] : fresh) sub[var] = {PathItem::make_constant(k)};
    Instance in;
    for (const auto& name : inputs) in.declare(name);
    for (const auto& q : chased.body) {
        Predicate g = substitute(sub, q);
        in.add(g.relation, to_path(g.path), g.value.is_empty_object() ? AtomicValue::empty_object() : AtomicValue::of(g.value.constant));
    }
    v.counterexample = in;
    try {
        Program q = p;
        q.declared_inputs = inputs;
        q.declared_outputs = outputs;
        Instance res = eval_query(q, in);
        v.verified = is_proper(in) && !is_proper(res);
    } catch (const Error&) {
        v.verified = false;
    }
}

ObjectObjectVerdict unsupported(std::string reason) {
    ObjectObjectVerdict v;
    v.kind = ObjectObjectVerdict::Kind::Unsupported;
    v.reason = std::move(reason);
    return v;
}

} // namespace

ObjectObjectVerdict decide_object_object(const Program& p, std::optional<std::set<std::string>> vocab_in,
                                         std::optional<std::set<std::string>> vocab_out) {
    Program d;
    try {
        d = desugar(p);
    } catch (const IllegalSugar& e) {
        return unsupported(e.what());
    }
    if (!is_positive(d)) return unsupported("the program uses negation");
    if (is_recursive(d)) return unsupported("the program is recursive");
    if (!is_equationally_acyclic(d)) return unsupported("the program is equationally cyclic");
    for (const auto& r : d.rules)
        if (!head_is_linear(r)) return unsupported("a head repeats a variable: " + to_string(r));
    const auto inputs = vocab_in.value_or(p.vocab_in());
    const auto outputs = vocab_out.value_or(p.vocab_out());

    std::vector<Rule> rules;
    try {
        rules = unfold(d, outputs);
    } catch (const Unsupported& e) {
        return unsupported(e.what());
    }
    for (const auto& r : rules) {
        for (const auto& q : predicates_of(r))
            if (!inputs.count(q.relation)) return unsupported("relation " + q.relation + " is neither an input nor derived");
        if (!head_is_linear(r)) return unsupported("inlining produced a head that repeats a variable: " + to_string(r));
    }

    std::vector<Jaegd> sigma;
    for (const auto& r : inputs) {
        auto ds = delta_for(r);
        sigma.insert(sigma.end(), ds.begin(), ds.end());
    }
    const auto templates = delta_for("D");
    ObjectObjectVerdict out;
    for (const auto& s : outputs) {
        std::vector<Rule> rs;
        for (const auto& r : rules)
            if (r.head.relation == s) rs.push_back(r);
        for (std::size_t i = 0; i < templates.size(); ++i) {
            for (const auto& a : rs) {
                for (const auto& b : rs) {
                    Rule ra = rename_apart(a, "l"), rb = rename_apart(b, "r");
                    auto j = combine(templates[i], ra, rb);
                    if (!j) continue;
                    std::vector<Jaegd> js;
                    try {
                        js = eliminate_equalities(*j, false);
                    } catch (const CyclicEquality& e) {
                        return unsupported(std::string("equality cannot be eliminated: ") + e.what());
                    }
                    for (const auto& x : js) {
                        ++out.checked;
                        auto v = decide_implication(x, sigma);
                        if (v.kind == VerdictKind::Implied) continue;
                        if (v.kind == VerdictKind::Ambiguous) return unsupported("ambiguous chase for " + to_string(x));
                        out.kind = ObjectObjectVerdict::Kind::No;
                        out.delta = i + 1;
                        out.relation = s;
                        out.rule1 = a;
                        out.rule2 = b;
                        out.dependency = x;
                        out.reason = "outputs of the two rules can violate properness dependency " + std::to_string(i + 1) + " on " + s;
                        attach_counterexample(out, p, v.outcome.result, inputs, outputs);
                        return out;
                    }
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Variants and containment

Variant make_variant(const Rule& r, const std::map<Variable, std::size_t>& lengths) {
    std::set<std::string> names;
    for (const auto& v : vars_of(r)) names.insert(v.name);
    Substitution s;
    for (const auto& v : vars_of(r)) {
        if (v.sort != VarSort::Path) continue;
        auto it = lengths.find(v);
        if (it == lengths.end() || it->second == 0) throw Error("no chosen length for " + v.name);
        std::string base = v.name + "^";
        auto clash = [&](const std::string& b) {
            for (std::size_t k = 1; k <= it->second; ++k)
                if (names.count(b + std::to_string(k))) return true;
            return false;
        };
        while (clash(base)) base += "^";
        PathExpr e;
        for (std::size_t k = 1; k <= it->second; ++k) e.push_back(PathItem::make_var(VarSort::Atomic, base + std::to_string(k)));
        s[v] = e;
    }
    return Variant{substitute(s, r), lengths};
}

std::vector<Variant> enumerate_variants(const Rule& r, std::size_t max_len) {
    std::vector<Variable> pvs;
    for (const auto& v : vars_of(r))
        if (v.sort == VarSort::Path) pvs.push_back(v);
    std::vector<Variant> out;
    std::map<Variable, std::size_t> len;
    for (const auto& v : pvs) len[v] = 1;
    if (max_len == 0 && !pvs.empty()) return out;
    for (;;) {
        out.push_back(make_variant(r, len));
        std::size_t k = 0;
        while (k < pvs.size() && len[pvs[k]] == max_len) len[pvs[k++]] = 1;
        if (k == pvs.size()) break;
        ++len[pvs[k]];
    }
    return out;
}

const char* to_string(ContainmentVerdict::Kind k) {
    switch (k) {
    case ContainmentVerdict::Kind::Contained: return "contained";
    case ContainmentVerdict::Kind::NotContained: return "not_contained";
    case ContainmentVerdict::Kind::PreconditionFailed: return "precondition_failed";
    }
    return "unknown";
}

namespace {

constexpr char kFrozen = '\x1f';

Key frozen(const Variable& v) { return Key::atom(std::string(1, kFrozen) + (v.sort == VarSort::Atomic ? "@" : "$") + v.name); }

Path freeze_path(const PathExpr& e) {
    Path out;
    for (const auto& it : e) {
        if (it.is_constant()) out.push_back(it.constant);
        else if (it.is_var()) out.push_back(frozen(it.var));
        else if (it.is_packed()) out.push_back(Key::packed(freeze_path(it.inner)));
        else throw Error("unexpected item");
    }
    return out;
}

AtomicValue freeze_value(const AtomicTerm& t) {
    if (t.is_empty_object()) return AtomicValue::empty_object();
    return AtomicValue::of(t.is_constant() ? t.constant : frozen(t.var));
}

Fact freeze_fact(const Predicate& p) { return Fact{p.relation, freeze_path(p.path), freeze_value(p.value)}; }

struct Prepared {
    std::vector<Rule> rules;
    std::string failure;
};

void check_flat_positive(const Rule& r, std::string& failure) {
    for (const auto& l : r.body) {
        if (l.negated) failure = "negation in " + to_string(r);
        else if (l.is_equality()) failure = "unsolved equality in " + to_string(r);
        else if (has_packing(l.predicate().path)) failure = "packing in the body of " + to_string(r);
        if (!failure.empty()) return;
    }
}

Prepared prepare_left(const Rule& r1) {
    Prepared out;
    try {
        for (const auto& c : desugar(r1)) {
            if (!is_positive(c)) {
                out.failure = "negation in " + to_string(c);
                return out;
            }
            for (const auto& x : eliminate_equalities(c, false)) out.rules.push_back(x);
        }
    } catch (const Error& e) {
        out.failure = e.what();
        return out;
    }
    for (const auto& r : out.rules) {
        check_flat_positive(r, out.failure);
        if (!out.failure.empty()) break;
    }
    return out;
}

Prepared prepare_right(const Program& p2, const std::string& relation) {
    Prepared out;
    try {
        out.rules = unfold(p2, {relation});
    } catch (const Error& e) {
        out.failure = e.what();
        return out;
    }
    for (const auto& r : out.rules) {
        check_flat_positive(r, out.failure);
        if (!out.failure.empty()) break;
    }
    return out;
}

// Rules have separate scopes, so counts add up.
std::size_t atomic_variable_count(const std::vector<Rule>& rules) {
    std::size_t n = 0;
    for (const auto& r : rules)
        for (const auto& v : vars_of(r))
            if (v.sort == VarSort::Atomic) ++n;
    return n;
}

bool covered(const Rule& variant, const std::vector<Rule>& rules2) {
    Instance frozen_body;
    for (const auto& p : predicates_of(variant)) frozen_body.add(freeze_fact(p));
    Fact h = freeze_fact(variant.head);
    for (const auto& r2 : rules2)
        if (eval_rule(r2, frozen_body).count(h)) return true;
    return false;
}

ContainmentVerdict precondition_failed(std::string reason) {
    ContainmentVerdict v;
    v.kind = ContainmentVerdict::Kind::PreconditionFailed;
    v.reason = std::move(reason);
    return v;
}

// Turns the frozen body of a variant into an instance over fresh constants
// and checks it separates the two sides.
void attach_counterexample(ContainmentVerdict& v, const Rule& left_original, const Program& p2, const std::vector<Rule>& rules2) {
    const Rule& r = v.witness->rule;
    std::set<std::string> used;
    for (const auto& s : constants_of(r)) used.insert(s);
    for (const auto& s : constants_of(p2)) used.insert(s);
    for (const auto& s : constants_of(left_original)) used.insert(s);
    std::map<std::string, std::string> rename;
    std::size_t next = 0;
    auto fresh = [&] {
        std::string s;
        do s = "k" + std::to_string(++next);
        while (used.count(s));
        return s;
    };
    for (const auto& var : vars_of(r)) rename[frozen(var).symbol()] = fresh();
    Instance frozen_body;
    for (const auto& p : predicates_of(r)) frozen_body.add(freeze_fact(p));
    Fact h = freeze_fact(r.head);
    Instance cex = apply_permutation(rename, frozen_body);
    Fact missing{h.relation, apply_permutation(rename, h.path), h.value};
    if (!missing.value.is_empty_object() && rename.count(missing.value.key().symbol()))
        missing.value = AtomicValue::atom(rename.at(missing.value.key().symbol()));
    v.counterexample = cex;
    v.missing = missing;
    try {
        bool left = eval_rule(left_original, cex).count(missing) > 0;
        Instance in = cex;
        for (const auto& name : p2.edb_names()) in.declare(name);
        Instance right = eval_query(p2, in.restricted_to(p2.vocab_in()));
        bool right_has = right.contains(missing);
        for (const auto& r2 : rules2) right_has = right_has || eval_rule(r2, cex).count(missing);
        v.verified = left && !right_has;
    } catch (const Error&) {
        v.verified = false;
    }
}

ContainmentVerdict contained_rule(const Rule& left_original, const Rule& r, const Program& p2, const std::vector<Rule>& rules2,
                                  const ContainmentOptions& o) {
    ContainmentVerdict v;
    std::size_t bound = o.max_length.value_or(atomic_variable_count(rules2) + 1);
    for (const auto& variant : enumerate_variants(r, bound)) {
        ++v.variants_checked;
        if (covered(variant.rule, rules2)) continue;
        Variant w = variant;
        if (o.minimize) {
            for (bool shrunk = true; shrunk;) {
                shrunk = false;
                for (auto& [var, n] : w.lengths) {
                    if (n == 1) continue;
                    auto lengths = w.lengths;
                    --lengths[var];
                    Variant smaller = make_variant(r, lengths);
                    if (!covered(smaller.rule, rules2)) {
                        w = smaller;
                        shrunk = true;
                        break;
                    }
                }
            }
        }
        v.kind = ContainmentVerdict::Kind::NotContained;
        v.witness = w;
        v.reason = "variant not covered: " + to_string(w.rule);
        attach_counterexample(v, left_original, p2, rules2);
        return v;
    }
    return v;
}

ContainmentVerdict decide_rules(const Rule& original, const std::vector<Rule>& lefts, const Program& p2, const ContainmentOptions& o) {
    ContainmentVerdict total;
    if (lefts.empty()) return total;
    auto right = prepare_right(p2, original.head.relation);
    if (!right.failure.empty()) return precondition_failed(right.failure);
    auto idb2 = p2.idb_names();
    for (const auto& r : lefts) {
        for (const auto& q : predicates_of(r))
            if (idb2.count(q.relation)) return precondition_failed("relation " + q.relation + " is derived on the right");
        auto v = contained_rule(original, r, p2, right.rules, o);
        total.variants_checked += v.variants_checked;
        if (v.kind != ContainmentVerdict::Kind::Contained) {
            v.variants_checked = total.variants_checked;
            return v;
        }
    }
    return total;
}

std::vector<Jaegd> properness_for(const std::vector<Rule>& rules) {
    std::set<std::string> rels;
    for (const auto& r : rules)
        for (const auto& q : predicates_of(r)) rels.insert(q.relation);
    std::vector<Jaegd> sigma;
    for (const auto& r : rels) {
        auto ds = delta_for(r);
        sigma.insert(sigma.end(), ds.begin(), ds.end());
    }
    return sigma;
}

} // namespace

std::optional<Rule> chase_rule(const Rule& r, const std::vector<Jaegd>& sigma) {
    // The head rides along as a body atom over a relation no dependency names.
    const std::string carrier(1, kFrozen);
    Jaegd j;
    j.body = predicates_of(r);
    Predicate head = r.head;
    head.relation = carrier;
    j.body.push_back(head);
    j.consequent = Consequent::make_bottom();
    auto out = chase(j, sigma);
    if (out.failed) return std::nullopt;
    Rule res;
    res.span = r.span;
    for (const auto& p : out.result.body) {
        if (p.relation == carrier) {
            res.head = p;
            res.head.relation = r.head.relation;
        } else {
            res.body.push_back(Literal::positive(p));
        }
    }
    return res;
}

ContainmentVerdict decide_containment_flat(const Rule& r1, const Program& p2, const ContainmentOptions& o) {
    auto left = prepare_left(r1);
    if (!left.failure.empty()) return precondition_failed(left.failure);
    return decide_rules(r1, left.rules, p2, o);
}

ContainmentVerdict decide_containment_proper_flat(const Rule& r1, const Program& p2, const ContainmentOptions& o) {
    auto left = prepare_left(r1);
    if (!left.failure.empty()) return precondition_failed(left.failure);
    std::vector<Rule> chased;
    for (const auto& r : left.rules) {
        auto c = chase_rule(r, properness_for({r}));
        if (c) chased.push_back(*c);
    }
    return decide_rules(r1, chased, p2, o);
}

namespace {

template <class F>
ContainmentVerdict per_output_rule(const Program& p1, const F& decide) {
    std::vector<Rule> rules;
    try {
        rules = unfold(p1, p1.vocab_out());
    } catch (const Error& e) {
        return precondition_failed(e.what());
    }
    ContainmentVerdict total;
    for (const auto& r : rules) {
        auto v = decide(r);
        total.variants_checked += v.variants_checked;
        if (v.kind != ContainmentVerdict::Kind::Contained) {
            v.variants_checked = total.variants_checked;
            return v;
        }
    }
    return total;
}

} // namespace

ContainmentVerdict decide_containment_flat(const Program& p1, const Program& p2, const ContainmentOptions& o) {
    return per_output_rule(p1, [&](const Rule& r) { return decide_containment_flat(r, p2, o); });
}

ContainmentVerdict decide_containment_proper_flat(const Program& p1, const Program& p2, const ContainmentOptions& o) {
    return per_output_rule(p1, [&](const Rule& r) { return decide_containment_proper_flat(r, p2, o); });
}

} // namespace jlogic
