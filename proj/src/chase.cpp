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

#include "jlogic/chase.hpp"

#include <algorithm>
#include <random>

#include "jlogic/errors.hpp"
#include "jlogic/eval.hpp"
#include "jlogic/parser.hpp"

namespace jlogic {

namespace {

// Frozen variables are atomic keys outside the symbol space of any parsed
// program: a unit separator followed by the sigil and name.
constexpr char kFrozenMark = '\x1f';

Key freeze_var(const Variable& v) {
    std::string s(1, kFrozenMark);
    s += v.sort == VarSort::Atomic ? '@' : '$';
    s += v.name;
    return Key::atom(s);
}

bool is_frozen(Key k) { return k.is_atomic() && !k.symbol().empty() && k.symbol()[0] == kFrozenMark; }

bool is_frozen_path_var(Key k) { return is_frozen(k) && k.symbol()[1] == '$'; }

void freeze(const PathExpr& e, Path& out) {
    for (const auto& it : e) {
        if (it.is_constant()) out.push_back(it.constant);
        else if (it.is_packed()) {
            Path inner;
            freeze(it.inner, inner);
            out.push_back(Key::packed(inner));
        } else if (it.is_var()) out.push_back(freeze_var(it.var));
        else throw Error("unexpected item in a dependency body");
    }
}

PathItem thaw(Key k);

PathExpr thaw(std::span<const Key> p) {
    PathExpr e;
    for (Key k : p) e.push_back(thaw(k));
    return e;
}

PathItem thaw(Key k) {
    if (k.is_packed()) return PathItem::make_packed(thaw(k.inner()));
    if (!is_frozen(k)) return PathItem::make_constant(k);
    const std::string& s = k.symbol();
    return PathItem::make_var(s[1] == '@' ? VarSort::Atomic : VarSort::Path, s.substr(2));
}

Instance freeze(const std::vector<Predicate>& body) {
    Instance db;
    for (const auto& p : body) {
        Path path;
        freeze(p.path, path);
        AtomicValue v = AtomicValue::empty_object();
        if (p.value.is_constant()) v = AtomicValue::of(p.value.constant);
        else if (p.value.is_var()) v = AtomicValue::of(freeze_var(p.value.var));
        db.add(p.relation, std::move(path), v);
    }
    return db;
}

std::vector<Substitution> morphisms(const std::vector<Predicate>& b1, const std::vector<Predicate>& b2, bool weak) {
    Instance db = freeze(b2);
    std::vector<Literal> lits;
    for (const auto& p : b1) lits.push_back(Literal::positive(p));
    SearchOptions opts;
    if (!weak) opts.atomic_ok = [](Key k) { return !is_frozen_path_var(k); };
    std::vector<Substitution> out;
    for_each_valuation(lits, db, opts, [&](const Valuation& nu) {
        Substitution h;
        for (const auto& [v, p] : nu) h[v] = thaw(p);
        out.push_back(std::move(h));
        return true;
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void require_equality_free(const Jaegd& j) {
    if (!j.equalities.empty()) throw Error("the chase needs equality-free dependencies: " + to_string(j));
}

AtomicTerm image(const Substitution& h, const AtomicTerm& t) { return t.is_var() ? substitute(h, t) : t; }

void dedupe(std::vector<Predicate>& body) {
    std::vector<Predicate> out;
    for (auto& p : body)
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
    body = std::move(out);
}

struct Step {
    std::size_t dependency;
    AtomicTerm u, v;
};

} // namespace

std::vector<Substitution> find_homomorphisms(const std::vector<Predicate>& b1, const std::vector<Predicate>& b2) {
    return morphisms(b1, b2, false);
}

std::vector<Substitution> find_weak_morphisms(const std::vector<Predicate>& b1, const std::vector<Predicate>& b2) {
    return morphisms(b1, b2, true);
}

bool is_strictly_weak(const Substitution& h) {
    for (const auto& [v, e] : h)
        if (v.sort == VarSort::Atomic && e.size() == 1 && e[0].is_var(VarSort::Path)) return true;
    return false;
}

ChaseOutcome chase(const Jaegd& sigma, const std::vector<Jaegd>& Sigma, const ChaseOptions& options) {
    require_equality_free(sigma);
    for (const auto& d : Sigma) require_equality_free(d);
    std::optional<std::mt19937_64> rng;
    if (options.shuffle_seed) rng.emplace(*options.shuffle_seed);

    ChaseOutcome out;
    out.result = sigma;
    dedupe(out.result.body);
    for (;;) {
        std::vector<Step> steps;
        for (std::size_t d = 0; d < Sigma.size(); ++d) {
            const Consequent& c = Sigma[d].consequent;
            for (const auto& h : find_homomorphisms(Sigma[d].body, out.result.body)) {
                if (c.bottom) {
                    out.failed = true;
                    out.steps++;
                    return out;
                }
                AtomicTerm u = image(h, c.lhs), v = image(h, c.rhs);
                if (u == v) continue;
                steps.push_back(Step{d, u, v});
                if (!rng) break;
            }
            if (!steps.empty() && !rng) break;
        }
        if (steps.empty()) break;
        const Step& s = rng ? steps[std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(*rng)] : steps.front();
        out.steps++;
        if (s.u.is_constant() && s.v.is_constant()) {
            out.failed = true;
            return out;
        }
        Substitution sub;
        if (s.v.is_var()) sub[s.v.var] = {s.u.is_constant() ? PathItem::make_constant(s.u.constant) : PathItem::make_var(s.u.var.sort, s.u.var.name)};
        else sub[s.u.var] = {PathItem::make_constant(s.v.constant)};
        out.result = substitute(sub, out.result);
        dedupe(out.result.body);
    }
    const Consequent& c = out.result.consequent;
    out.trivial_consequent = c.is_trivial();
    return out;
}

AmbiguityReport is_unambiguous(const ChaseOutcome& outcome, const std::vector<Jaegd>& Sigma) {
    AmbiguityReport r;
    if (outcome.failed) return r;
    for (std::size_t d = 0; d < Sigma.size(); ++d) {
        for (const auto& h : find_weak_morphisms(Sigma[d].body, outcome.result.body)) {
            if (is_strictly_weak(h)) {
                r.unambiguous = false;
                r.witness = h;
                r.dependency = d;
                return r;
            }
        }
    }
    return r;
}

const char* to_string(VerdictKind k) {
    switch (k) {
    case VerdictKind::Implied: return "implied";
    case VerdictKind::NotImpliedByChase: return "not_implied";
    case VerdictKind::Ambiguous: return "ambiguous";
    }
    return "unknown";
}

ImplicationVerdict decide_implication(const Jaegd& sigma, const std::vector<Jaegd>& Sigma) {
    ImplicationVerdict v;
    v.outcome = chase(sigma, Sigma);
    if (v.outcome.failed || v.outcome.trivial_consequent) {
        v.kind = VerdictKind::Implied;
        return v;
    }
    v.ambiguity = is_unambiguous(v.outcome, Sigma);
    v.kind = v.ambiguity.unambiguous ? VerdictKind::NotImpliedByChase : VerdictKind::Ambiguous;
    return v;
}

std::vector<Jaegd> delta_for(const std::string& relation) {
    static const char* kTemplate[] = {
        "D($x:@i), D($x:@j) -> @i = @j.",
        "D($x:{}), D($x:@i) -> false.",
        "D($x:@i), D($x.$y:{}) -> false.",
        "D($x:@i), D($x.$y:@j) -> false.",
        "D($x:{}), D($x.$y:{}) -> false.",
        "D($x:{}), D($x.$y:@j) -> false.",
    };
    std::vector<Jaegd> out;
    for (const char* t : kTemplate) {
        Jaegd j = parse_jaegd(t);
        for (auto& p : j.body) p.relation = relation;
        out.push_back(std::move(j));
    }
    return out;
}

bool satisfies(const Instance& i, const Jaegd& j) {
    std::vector<Literal> lits;
    for (const auto& p : j.body) lits.push_back(Literal::positive(p));
    for (const auto& e : j.equalities) lits.push_back(Literal::equal(e.lhs, e.rhs));
    const Consequent& c = j.consequent;
    bool ok = true;
    auto eval = [](const AtomicTerm& t, const Valuation& nu) -> Key {
        return t.is_constant() ? t.constant : nu.at(t.var).front();
    };
    for_each_valuation(lits, i, {}, [&](const Valuation& nu) {
        if (c.bottom || eval(c.lhs, nu) != eval(c.rhs, nu)) ok = false;
        return ok;
    });
    return ok;
}

bool satisfies(const Instance& i, const std::vector<Jaegd>& js) {
    return std::all_of(js.begin(), js.end(), [&](const Jaegd& j) { return satisfies(i, j); });
}

std::string to_string(const Substitution& h) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, e] : h) {
        if (!first) out += ", ";
        first = false;
        out += to_string(PathExpr{PathItem::make_var(v.sort, v.name)}) + " -> " + to_string(e);
    }
    return out + "}";
}

} // namespace jlogic
