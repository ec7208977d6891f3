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

#include "jlogic/transform.hpp"

#include <set>

#include "jlogic/desugar.hpp"
#include "jlogic/errors.hpp"
#include "jlogic/parser.hpp"
#include "jlogic/unify.hpp"

namespace jlogic {

namespace {

class Names {
public:
    explicit Names(const Program& p) {
        for (const auto& n : p.idb_names()) used_.insert(n);
        for (const auto& n : p.edb_names()) used_.insert(n);
        for (const auto& n : p.vocab_in()) used_.insert(n);
        for (const auto& n : p.vocab_out()) used_.insert(n);
    }
    std::string fresh(std::string base) {
        while (used_.count(base)) base += "'";
        used_.insert(base);
        return base;
    }
    bool taken(const std::string& n) const { return used_.count(n) > 0; }
    void take(const std::string& n) { used_.insert(n); }

private:
    std::set<std::string> used_;
};

std::string sym(const std::string& s) { return to_string(Key::atom(s)); }

// Substitutes {name} placeholders and parses the rule.
Rule rule_from(std::string text, const std::map<std::string, std::string>& fill) {
    for (const auto& [k, v] : fill) {
        std::string key = "{" + k + "}";
        for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + v.size()))
            text.replace(pos, key.size(), v);
    }
    return parse_rule(text);
}

std::vector<Rule> equality_free(const Program& d) {
    std::vector<Rule> out;
    for (const auto& r : d.rules) {
        try {
            auto rs = eliminate_equalities(r, false);
            // An unsatisfiable rule is kept so its head stays defined.
            if (rs.empty()) rs.push_back(r);
            out.insert(out.end(), rs.begin(), rs.end());
        } catch (const CyclicEquality&) {
            // Kept as encoded equalities.
            out.push_back(r);
        }
    }
    return out;
}

std::set<std::string> relations_of(const Program& p) {
    std::set<std::string> out = p.vocab_in();
    for (const auto& n : p.idb_names()) out.insert(n);
    for (const auto& n : p.edb_names()) out.insert(n);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Proper intermediates

Program properize_intermediates(const Program& p) {
    Program d = desugar(p);
    const auto inputs = p.vocab_in();
    const auto outputs = p.vocab_out();
    Names names(d);
    std::map<std::string, std::string> primed;
    for (const auto& n : relations_of(d)) primed[n] = names.fresh(n + "'");

    std::set<std::string> consts = constants_of(d);
    std::string b = "b";
    for (std::size_t k = 1; consts.count(b); ++k) b = "b_" + std::to_string(k);
    const PathItem bb = PathItem::make_packed({PathItem::make_constant(b), PathItem::make_constant(b)});

    auto encode = [&](const Predicate& q) {
        Predicate out;
        out.relation = primed.at(q.relation);
        out.path = {PathItem::make_packed(q.path)};
        if (q.value.is_empty_object()) out.path.push_back(bb);
        else if (q.value.is_constant()) out.path.push_back(PathItem::make_packed({PathItem::make_constant(q.value.constant)}));
        else out.path.push_back(PathItem::make_packed({PathItem::make_var(q.value.var.sort, q.value.var.name)}));
        out.value = AtomicTerm::empty_object();
        return out;
    };

    Program out;
    out.declared_inputs = inputs;
    out.declared_outputs = outputs;
    for (const auto& r : inputs) {
        std::map<std::string, std::string> fill{{"R", r}, {"P", primed.at(r)}, {"b", sym(b)}};
        out.rules.push_back(rule_from("{P}(<$x>.<@u>:{}) :- {R}($x:@u).", fill));
        out.rules.push_back(rule_from("{P}(<$x>.<{b}.{b}>:{}) :- {R}($x:{}).", fill));
    }
    for (const auto& r : d.rules) {
        Rule n = r;
        n.head = encode(r.head);
        // Negated input atoms read the input directly; going through R'
        // would push the rule one stratum up.
        for (auto& l : n.body)
            if (l.is_predicate() && !(l.negated && inputs.count(l.predicate().relation) && !d.idb_names().count(l.predicate().relation)))
                l.atom = encode(l.predicate());
        out.rules.push_back(std::move(n));
    }
    for (const auto& s : outputs) {
        std::map<std::string, std::string> fill{{"S", s}, {"P", primed.at(s)}, {"b", sym(b)}};
        out.rules.push_back(rule_from("{S}($x:@u) :- {P}(<$x>.<@u>:{}).", fill));
        out.rules.push_back(rule_from("{S}($x:{}) :- {P}(<$x>.<{b}.{b}>:{}).", fill));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Packing elimination

Path encode_path(std::span<const Key> p, const DepackSymbols& s) {
    Path out;
    for (Key k : p) {
        if (k.is_atomic()) {
            out.push_back(k);
            out.push_back(k);
            continue;
        }
        out.push_back(Key::atom(s.open));
        out.push_back(Key::atom(s.close));
        Path inner = encode_path(k.inner(), s);
        out.insert(out.end(), inner.begin(), inner.end());
        out.push_back(Key::atom(s.close));
        out.push_back(Key::atom(s.open));
    }
    return out;
}

std::string validity_relation(const std::string& b) { return "Enc_" + b; }

namespace {

PathExpr encode_expr(const PathExpr& e, const DepackSymbols& s) {
    PathExpr out;
    for (const auto& it : e) {
        if (it.is_constant() || it.is_var(VarSort::Atomic)) {
            out.push_back(it);
            out.push_back(it);
        } else if (it.is_packed()) {
            out.push_back(PathItem::make_constant(s.open));
            out.push_back(PathItem::make_constant(s.close));
            for (auto& x : encode_expr(it.inner, s)) out.push_back(std::move(x));
            out.push_back(PathItem::make_constant(s.close));
            out.push_back(PathItem::make_constant(s.open));
        } else if (it.is_var()) {
            out.push_back(it);
        } else {
            throw Error("cannot encode " + to_string(e));
        }
    }
    return out;
}

// Rules computing in `cur` a run of cursor symbols one longer than any run
// occurring in relation x.
std::string cursor_rules(const std::string& x, Names& names, const DepackSymbols& s, std::vector<Rule>& out) {
    std::map<std::string, std::string> f{{"X", x},
                                         {"sub", names.fresh(x + "_sub")},
                                         {"subn", names.fresh(x + "_subn")},
                                         {"subc", names.fresh(x + "_subc")},
                                         {"has", names.fresh(x + "_hasc")},
                                         {"cur", names.fresh(x + "_cur")},
                                         {"c", sym(s.cursor)}};
    for (const char* t : {"{sub}({c}.?y:{}) :- {X}(?x.{c}.?y.?z:%u).",
                          "{subn}($x.@i.?y:{}) :- {sub}($x.@i.?y:{}), @i != {c}.",
                          "{subc}($x:{}) :- {sub}($x:{}), not {subn}($x:{}).",
                          "{cur}({c}.$x:{}) :- {subc}($x:{}), not {subc}({c}.$x:{}).",
                          "{has}({c}:{}) :- {subc}({c}:{}).",
                          "{cur}({c}:{}) :- not {has}({c}:{})."})
        out.push_back(rule_from(t, f));
    return f.at("cur");
}

} // namespace

Rule depack_rule(const Rule& r, const DepackSymbols& s, const std::map<std::string, std::string>& rename) {
    auto rel = [&](const std::string& n) {
        auto it = rename.find(n);
        return it == rename.end() ? n : it->second;
    };
    auto pred = [&](const Predicate& q) { return Predicate{rel(q.relation), encode_expr(q.path, s), q.value}; };
    Rule out;
    out.span = r.span;
    out.head = pred(r.head);
    std::vector<Variable> order;
    std::map<Variable, std::string> source;
    for (const auto& l : r.body) {
        Literal n = l;
        if (l.is_predicate()) {
            n.atom = pred(l.predicate());
            if (!l.negated) {
                std::set<Variable> vs;
                collect_vars(l.predicate().path, vs);
                std::vector<Variable> in_order;
                std::function<void(const PathExpr&)> scan = [&](const PathExpr& e) {
                    for (const auto& it : e) {
                        if (it.is_var(VarSort::Path) && !source.count(it.var)) {
                            source[it.var] = rel(l.predicate().relation);
                            order.push_back(it.var);
                        }
                        if (it.is_packed()) scan(it.inner);
                    }
                };
                scan(l.predicate().path);
            }
        } else {
            const auto& e = l.equality();
            n.atom = Equality{encode_expr(e.lhs, s), encode_expr(e.rhs, s)};
        }
        out.body.push_back(std::move(n));
    }
    for (const auto& v : order)
        out.body.push_back(Literal::positive(
            Predicate{validity_relation(source.at(v)), {PathItem::make_var(v.sort, v.name)}, AtomicTerm::empty_object()}));
    return out;
}

Program eliminate_packing(const Program& p, const DepackSymbols& s) {
    if (s.open == s.close || s.cursor == s.mark) throw Error("reserved symbols must be pairwise distinct");
    Program d = desugar(p);
    const auto inputs = p.vocab_in();
    const auto outputs = p.vocab_out();
    Names names(d);
    std::map<std::string, std::string> rename;
    for (const auto& n : relations_of(d)) {
        std::string base = n + "_e";
        while (names.taken(base) || names.taken(validity_relation(base))) base += "'";
        names.take(base);
        names.take(validity_relation(base));
        rename[n] = base;
    }

    Program out;
    out.declared_inputs = inputs;
    out.declared_outputs = outputs;
    const std::string m = sym(s.mark);
    for (const auto& r : inputs) {
        std::string cur = cursor_rules(r, names, s, out.rules);
        std::map<std::string, std::string> f{{"R", r}, {"E", names.fresh(r + "_enc")}, {"Re", rename.at(r)}, {"cur", cur}, {"d", m}};
        out.rules.push_back(rule_from("{E}($x.{d}.$k.$k.{d}:%u) :- {R}($x:%u), {cur}($k:{}).", f));
        out.rules.push_back(rule_from("{E}(?x.{d}.$k.$k.{d}.@i.@i.?y:%u) :- {E}(?x.@i.{d}.$k.$k.{d}.?y:%u), {cur}($k:{}).", f));
        out.rules.push_back(rule_from("{Re}($x:%u) :- {E}({d}.$k.$k.{d}.$x:%u), {cur}($k:{}).", f));
    }
    std::set<std::string> checked;
    for (const auto& r : equality_free(d)) {
        Rule t = depack_rule(r, s, rename);
        for (const auto& l : t.body)
            if (l.is_predicate()) checked.insert(l.predicate().relation);
        out.rules.push_back(std::move(t));
    }
    std::map<std::string, std::string> f{{"a", sym(s.open)}, {"b", sym(s.close)}};
    for (const auto& [orig, b] : rename) {
        if (!checked.count(validity_relation(b))) continue;
        f["B"] = b;
        f["E"] = validity_relation(b);
        for (const char* t : {"{E}(@i.@i:{}) :- {B}(?u.@i.@i.?v:%w).",
                              "{E}(@i.@i.$x:{}) :- {B}(?u.@i.@i.$x.?v:%w), {E}($x:{}).",
                              "{E}($x.@i.@i:{}) :- {B}(?u.$x.@i.@i.?v:%w), {E}($x:{}).",
                              "{E}({a}.{b}.$x.{b}.{a}:{}) :- {B}(?u.{a}.{b}.$x.{b}.{a}.?v:%w), {E}($x:{}).",
                              "{E}($x.{a}.{b}.$y.{b}.{a}:{}) :- {B}(?u.$x.{a}.{b}.$y.{b}.{a}.?v:%w), {E}($x:{}), {E}($y:{})."})
            out.rules.push_back(rule_from(t, f));
    }
    for (const auto& o : outputs) {
        const std::string& se = rename.at(o);
        std::string cur = cursor_rules(se, names, s, out.rules);
        std::map<std::string, std::string> g{{"S", o}, {"D", names.fresh(o + "_dec")}, {"Se", se}, {"cur", cur}, {"d", m}};
        out.rules.push_back(rule_from("{D}($x.{d}.$k.{d}:%u) :- {Se}($x:%u), {cur}($k:{}).", g));
        out.rules.push_back(rule_from("{D}(?x.{d}.$k.{d}.@i.?y:%u) :- {D}(?x.@i.@i.{d}.$k.{d}.?y:%u), {cur}($k:{}).", g));
        out.rules.push_back(rule_from("{S}($x:%u) :- {D}({d}.$k.{d}.$x:%u), {cur}($k:{}).", g));
    }
    return out;
}

} // namespace jlogic
