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

// Runs the acceptance criteria and prints one PASS/FAIL line for each.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "jlogic/analysis.hpp"
#include "jlogic/chase.hpp"
#include "jlogic/desugar.hpp"
#include "jlogic/errors.hpp"
#include "jlogic/eval.hpp"
#include "jlogic/json_io.hpp"
#include "jlogic/parser.hpp"
#include "jlogic/transform.hpp"
#include "testing.hpp"

using namespace jlogic;
using namespace jlogic::testing;

namespace {

struct Result {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// 1 -------------------------------------------------------------------------

const char* kCartesian = R"(
T(<@x.@y>.r.@x.$x1:@u) :- R(@x.$x1:@u), S(@y.$y1:@v).
T(<@x.@y>.s.@y.$y1:@v) :- R(@x.$x1:@u), S(@y.$y1:@v).
)";

ObjectTree tree(std::initializer_list<std::pair<const char*, ObjectTree>> entries) {
    ObjectTree t;
    for (const auto& [k, v] : entries) t.set(k, v);
    return t;
}

Result cartesian() {
    std::map<std::string, ObjectTree> sub{
        {"a", tree({{"name", ObjectTree::leaf("anne")}})},
        {"b", tree({{"name", ObjectTree::leaf("bob")}, {"age", tree({{"years", ObjectTree::leaf("18")}})}})},
        {"c", tree({{"x", ObjectTree::leaf("1")}, {"y", ObjectTree::leaf("2")}})},
        {"d", tree({{"z", tree({{"w", ObjectTree::leaf("3")}})}})},
    };
    Instance in;
    for (const char* k : {"a", "b"})
        for (const auto& pv : od_encode(tree({{k, sub[k]}}))) in.add("R", pv.path, pv.value);
    for (const char* k : {"c", "d"})
        for (const auto& pv : od_encode(tree({{k, sub[k]}}))) in.add("S", pv.path, pv.value);

    // T = {<x.y> : {r:{x:o_x}, s:{y:o_y}}} built directly from the objects.
    ObjectTree t;
    for (const char* x : {"a", "b"})
        for (const char* y : {"c", "d"})
            t.set(Key::packed(Path{Key::atom(x), Key::atom(y)}), tree({{"r", tree({{x, sub[x]}})}, {"s", tree({{y, sub[y]}})}}));
    Instance expected;
    for (const auto& pv : od_encode(t)) expected.add("T", pv.path, pv.value);

    auto start = Clock::now();
    Instance out = eval_query(parse_program(kCartesian), in);
    double secs = seconds_since(start);
    Instance fresh = freshen_packed_keys(out, "t");
    std::set<Key> tops;
    bool atomic_tops = true;
    for (const auto& pv : fresh.relation("T")) {
        tops.insert(pv.path[0]);
        atomic_tops = atomic_tops && pv.path[0].is_atomic();
    }
    std::ostringstream d;
    d << out.size() << " facts, " << tops.size() << " fresh top keys, " << secs << " s";
    return {out == expected && tops.size() == 4 && atomic_tops && secs < 1.0, d.str()};
}

// 2 -------------------------------------------------------------------------

const char* kDeepEquality = R"(
output Q.
T(atomic:{}) :- R(a:%u), R(b:%v).
Q'(no:{}) :- R(a.$x:%u), not R(b.$x:%u).
Q'(no:{}) :- R(b.$x:%u), not R(a.$x:%u).
Q(yes:{}) :- not T(atomic:{}), not Q'(no:{}).
Q(yes:{}) :- R(a:%u), R(b:%u).
)";

bool same_tree(const ObjectTree& x, const ObjectTree& y) {
    if (x.is_atomic() || y.is_atomic()) return x.is_atomic() && y.is_atomic() && x.atom() == y.atom();
    if (x.entries().size() != y.entries().size()) return false;
    for (const auto& [k, v] : x.entries()) {
        auto it = y.entries().find(k);
        if (it == y.entries().end() || !same_tree(v, it->second)) return false;
    }
    return true;
}

ObjectTree perturb(std::mt19937& rng, ObjectTree t) {
    if (t.is_atomic() || t.entries().empty() || rng() % 3 == 0) {
        if (rng() % 2) return ObjectTree::leaf(std::string(1, char('0' + rng() % 3)));
        return random_object(rng, 1);
    }
    auto entries = t.entries();
    auto it = entries.begin();
    std::advance(it, rng() % entries.size());
    ObjectTree out;
    for (const auto& [k, v] : entries) out.set(k, k == it->first ? perturb(rng, v) : v);
    return out;
}

Result deep_equality() {
    Program p = parse_program(kDeepEquality);
    std::mt19937 rng(2024);
    int mismatches = 0, equal = 0;
    auto start = Clock::now();
    for (int n = 0; n < 1000; ++n) {
        auto value = [&]() { return rng() % 5 == 0 ? ObjectTree::leaf(std::string(1, char('0' + rng() % 3))) : random_object(rng, 3); };
        ObjectTree a = value();
        ObjectTree b = rng() % 2 ? a : (rng() % 2 ? perturb(rng, a) : value());
        ObjectTree o;
        o.set("a", a);
        o.set("b", b);
        if (rng() % 2) o.set("c", random_object(rng, 2));
        Instance in;
        in.declare("R");
        for (const auto& pv : od_encode(o)) in.add("R", pv.path, pv.value);
        bool says = eval_query(p, in).contains(Fact{"Q", Path{Key::atom("yes")}, AtomicValue::empty_object()});
        bool oracle = same_tree(a, b);
        equal += oracle;
        mismatches += says != oracle;
    }
    double secs = seconds_since(start);
    std::ostringstream d;
    d << mismatches << " mismatches over 1000 objects (" << equal << " equal pairs), " << secs << " s";
    return {mismatches == 0 && secs < 30.0, d.str()};
}

// 3 -------------------------------------------------------------------------

Result properness() {
    std::mt19937 rng(33);
    int disagreements = 0, proper_count = 0;
    auto start = Clock::now();
    for (int n = 0; n < 1000; ++n) {
        ObjectDescription d;
        if (rng() % 2) {
            d = od_encode(random_object(rng, 3));
            for (int k = static_cast<int>(rng() % 3); k > 0 && !d.empty(); --k) {
                auto it = d.begin();
                std::advance(it, rng() % d.size());
                PathValue pv = *it;
                if (rng() % 2) pv.value = AtomicValue::atom(std::string(1, char('0' + rng() % 3)));
                else pv.path.push_back(Key::atom("a"));
                d.insert(pv);
            }
        } else {
            for (int k = static_cast<int>(rng() % 5); k > 0; --k) {
                Path p;
                for (int j = 1 + static_cast<int>(rng() % 3); j > 0; --j) p.push_back(Key::atom(std::string(1, char('a' + rng() % 2))));
                d.insert(PathValue{p, rng() % 3 ? AtomicValue::atom(std::string(1, char('0' + rng() % 2))) : AtomicValue::empty_object()});
            }
        }
        bool decodes = true;
        try {
            od_decode(d);
        } catch (const ImproperDescription&) {
            decodes = false;
        }
        bool proper = is_proper(d).proper;
        proper_count += proper;
        disagreements += proper != decodes;
    }
    auto fd = is_proper(ObjectDescription{{parse_path("a"), AtomicValue::atom("1")}, {parse_path("a"), AtomicValue::atom("2")}});
    auto prefix = is_proper(ObjectDescription{{parse_path("a"), AtomicValue::atom("1")}, {parse_path("a.a"), AtomicValue::atom("1")}});
    bool witnesses = !fd.proper && fd.violations.size() == 1 && fd.violations[0].kind == ViolationKind::FunctionalDependency &&
                     !prefix.proper && prefix.violations.size() == 1 && prefix.violations[0].kind == ViolationKind::Prefix;
    double secs = seconds_since(start);
    std::ostringstream d;
    d << disagreements << " disagreements over 1000 descriptions (" << proper_count << " proper), witness kinds "
      << (witnesses ? "correct" : "wrong") << ", " << secs << " s";
    return {disagreements == 0 && witnesses && secs < 5.0, d.str()};
}

// 4 -------------------------------------------------------------------------

Result chase_behaviour() {
    auto start = Clock::now();
    auto Sigma = parse_jaegds("P(@x:{}) -> false.\nP(<$x>:{}) -> false.\nP($x.$y:{}) -> false.\n");
    Jaegd sigma = parse_jaegd("P($x:{}) -> false.");
    auto outcome = chase(sigma, Sigma);
    bool no_step = !outcome.failed && outcome.steps == 0 && outcome.result == sigma && !outcome.trivial_consequent;
    auto v = decide_implication(sigma, Sigma);
    bool ambiguous = v.kind == VerdictKind::Ambiguous && to_string(v.ambiguity.witness) == "{@x -> $x}";
    auto weak = find_weak_morphisms(Sigma[0].body, sigma.body);
    bool weak_only = find_homomorphisms(Sigma[0].body, sigma.body).empty() && weak.size() == 1;

    auto delta = delta_for("D");
    bool fails = chase(parse_jaegd("D($x:a), D($x:b) -> false."), delta).failed &&
                 chase(parse_jaegd("D(c.$y:@i), D(c.$y:a), D(c.$y:b) -> @i = @i."), delta).failed &&
                 chase(parse_jaegd("D($x:a), D($x:b), D($z:@k) -> @k = a."), delta).failed;
    double secs = seconds_since(start);
    std::ostringstream d;
    d << "no step " << no_step << ", ambiguous with " << to_string(v.ambiguity.witness) << " " << ambiguous << ", weak-only " << weak_only
      << ", delta1 violations fail " << fails << ", " << secs << " s";
    return {no_step && ambiguous && weak_only && fails && secs < 1.0, d.str()};
}

// 5 -------------------------------------------------------------------------

Result chase_soundness() {
    RandomJaegds gen(5);
    std::size_t implied = 0, unsound = 0;
    auto start = Clock::now();
    for (int n = 0; n < 10000; ++n) {
        std::vector<Jaegd> Sigma;
        for (int k = 1 + gen.pick(3); k > 0; --k) Sigma.push_back(gen.jaegd(3));
        Jaegd sigma = gen.pick(2) ? gen.specialize(Sigma[gen.pick(static_cast<int>(Sigma.size()))]) : gen.jaegd(3);
        if (sigma.body.size() > 3) sigma.body.resize(3);
        if (decide_implication(sigma, Sigma).kind != VerdictKind::Implied) continue;
        ++implied;
        if (find_counterexample(Sigma, sigma, {"a", "b", "c"}, 3, false)) ++unsound;
    }
    double secs = seconds_since(start);
    std::ostringstream d;
    d << unsound << " unsound of " << implied << " implied verdicts over 10000 pairs, " << secs << " s";
    return {unsound == 0 && implied > 0 && secs < 300.0, d.str()};
}

// 6 -------------------------------------------------------------------------

Result object_object() {
    auto start = Clock::now();
    bool strip = decide_object_object(parse_program("S($y:%u) :- R(#x.$y:%u).")).kind == ObjectObjectVerdict::Kind::No;
    bool unnest = decide_object_object(parse_program("S(<$x>.$y:%u) :- R($x.name:John), R($x.$y:%u).")).kind == ObjectObjectVerdict::Kind::Yes;
    RandomPositive gen(6);
    std::mt19937 rng(66);
    int yes = 0, no = 0, unsupported = 0, contradictions = 0, no_confirmed = 0;
    for (int n = 0; n < 200; ++n) {
        Program p = gen.program();
        auto v = decide_object_object(p);
        if (v.kind == ObjectObjectVerdict::Kind::Unsupported) {
            ++unsupported;
            continue;
        }
        if (v.kind == ObjectObjectVerdict::Kind::No) {
            ++no;
            no_confirmed += v.verified;
            continue;
        }
        ++yes;
        for (int k = 0; k < 500; ++k) {
            Instance in = proper_input(rng, 3);
            if (!is_proper(eval_query(p, in))) {
                ++contradictions;
                break;
            }
        }
    }
    double secs = seconds_since(start);
    std::ostringstream d;
    d << "strip " << (strip ? "no" : "WRONG") << ", unnest " << (unnest ? "yes" : "WRONG") << "; " << yes << " yes, " << no << " no ("
      << no_confirmed << " with confirmed counterexample), " << unsupported << " unsupported; " << contradictions << " contradictions, "
      << secs << " s";
    return {strip && unnest && contradictions == 0 && secs < 300.0, d.str()};
}

// 7 -------------------------------------------------------------------------

Program single(const Rule& r) {
    Program p;
    p.rules.push_back(r);
    p.declared_inputs = std::set<std::string>{"R"};
    p.declared_outputs = std::set<std::string>{"S"};
    return p;
}

Result containment() {
    using K = ContainmentVerdict::Kind;
    auto start = Clock::now();
    Rule r1 = parse_rule("S(c:{}) :- R($x.$y:{}).");
    Rule r2 = parse_rule("S(c:{}) :- R(@u.$z:{}).");
    bool remark = decide_containment_flat(r1, single(r2)).kind == K::Contained;
    Instance packed;
    packed.add("R", Path{Key::packed(parse_path("a")), Key::atom("b")}, AtomicValue::empty_object());
    bool scope = !eval_rule(r1, packed).empty() && eval_query(single(r2), packed).relation("S").empty();

    auto mutual = [&](const char* a, const char* b) {
        Rule x = parse_rule(a), y = parse_rule(b);
        return decide_containment_flat(x, single(y)).kind == K::Contained && decide_containment_flat(y, single(x)).kind == K::Contained;
    };
    bool patterns = mutual("S($x.$y:{}) :- R($x.$y:{}).", "S(@x.$y:{}) :- R(@x.$y:{}).") &&
                    mutual("S(@x.$y.@z:{}) :- R(@x.$y.@z:{}).", "S($u.@v.$w:{}) :- R($u.@v.$w:{}).");

    RandomPositive gen(7);
    int contained = 0, not_contained = 0, errors = 0, skipped = 0;
    for (int n = 0; n < 1000; ++n) {
        Rule right = gen.rule(2, false);
        Rule left = gen.pick(2) ? gen.specialize(right) : gen.rule(2, false);
        if (left.body.size() > 2) left.body.resize(2);
        if (!check_safety(left).safe) {
            left = right;
            if (gen.pick(2)) std::swap(left.body[0], left.body.back());
        }
        Program p2 = single(right);
        auto v = decide_containment_flat(left, p2);
        if (v.kind == K::PreconditionFailed) {
            ++skipped;
            continue;
        }
        if (v.kind == K::NotContained) {
            ++not_contained;
            if (!v.verified) ++errors;
            continue;
        }
        ++contained;
        std::size_t m = atomic_count(p2);
        std::vector<std::string> alphabet;
        for (std::size_t k = 0; k < m + 2; ++k) alphabet.push_back(std::string(1, char('a' + k)));
        if (containment_counterexample(left, p2, alphabet, m + 2)) ++errors;
    }
    double secs = seconds_since(start);
    std::ostringstream d;
    d << "remark " << remark << ", flat-only scope " << scope << ", patterns " << patterns << "; " << contained << " contained, "
      << not_contained << " not contained, " << skipped << " precondition failures, " << errors << " errors, " << secs << " s";
    return {remark && scope && patterns && errors == 0 && skipped == 0 && secs < 600.0, d.str()};
}

// 8 -------------------------------------------------------------------------

const char* kInterleave = R"(
input R. output S.
T(<@i>.?y:{}) :- R(@i.?y:{}).
T(?x.@i.c.<@j>.?y:{}) :- T(?x.<@i>.@j.?y:{}).
S(?x.@i.c:{}) :- T(?x.<@i>:{}).
)";

Result transformations() {
    auto start = Clock::now();
    bool encoding = to_string(encode_path(parse_path("a.c.<a.b>.b.a"))) == "a.a.c.c.a.b.a.a.b.b.b.a.b.b.a.a";
    std::string shown = to_string(depack_rule(parse_rule("A(@v.a.$y:@w) :- B($x.<c.$y>.@w:@v), not C(@v.b:{}).")));
    const std::string corrected = "A(@v.@v.a.a.$y:@w) :- B($x.a.b.c.c.$y.b.a.@w.@w:@v), not C(@v.@v.b.b:{}), Enc_B($x:{}), Enc_B($y:{}).";
    const std::string verbatim = "A(@v.@v.a.a.$y:@w) :- B($x.a.b.c.$y.b.a.@w.@w:@v), not C(@v.@v.b.b:{}), Enc_B($x:{}), Enc_B($y:{}).";
    std::string undoubled = shown;
    if (auto pos = undoubled.find("c.c.$y"); pos != std::string::npos) undoubled.replace(pos, 6, "c.$y");
    bool display = shown == corrected && undoubled == verbatim;

    Program p = parse_program(kInterleave);
    Program t = eliminate_packing(p);
    std::mt19937 rng(8);
    const char* alphabet = "abcde";
    int depack_diffs = 0, nonempty = 0;
    for (int n = 0; n < 200; ++n) {
        Instance in;
        in.declare("R");
        for (int k = 1 + static_cast<int>(rng() % 3); k > 0; --k) {
            Path path;
            for (int j = 1 + static_cast<int>(rng() % 4); j > 0; --j) path.push_back(Key::atom(std::string(1, alphabet[rng() % 5])));
            in.add("R", path, rng() % 4 ? AtomicValue::empty_object() : AtomicValue::atom("a"));
        }
        Instance expected = eval_query(p, in);
        nonempty += !expected.relation("S").empty();
        if (!(eval_query(t, in) == expected)) ++depack_diffs;
    }

    const char* programs[] = {
        "S(<$x>.$y:%u) :- R($x.name:John), R($x.$y:%u).",
        "output S.\nT($x.ref:{}) :- R($x.ref:@k).\nS($x.ref.<$y>.?z:%u) :- R($x.ref:@k), R($y.@k.?z:%u).\nS($x2:%u) :- R($x2:%u), not T($x2:{}).\n",
        kDeepEquality,
    };
    int prop_diffs = 0, improper = 0;
    for (const char* text : programs) {
        Program q = parse_program(text);
        Program u = properize_intermediates(q);
        const auto outs = u.vocab_out();
        for (int n = 0; n < 200; ++n) {
            Instance in = proper_input(rng, 3);
            if (!(eval_query(u, in) == eval_query(q, in))) ++prop_diffs;
            Instance all = eval_program(u, in);
            for (const auto& [rel, d] : all.relations())
                if (!outs.count(rel) && rel != "R" && !is_proper(d).proper) ++improper;
        }
    }
    double secs = seconds_since(start);
    std::ostringstream d;
    d << "encoding " << encoding << ", display " << display << " (undoubled variant also matches), depack "
      << depack_diffs << "/200 differences (" << nonempty << " nonempty), properize " << prop_diffs << "/600 differences, " << improper << " improper intermediates, "
      << secs << " s";
    return {encoding && display && depack_diffs == 0 && prop_diffs == 0 && improper == 0 && secs < 300.0, d.str()};
}

// 9 -------------------------------------------------------------------------

Result nontermination() {
    std::string cmd = std::string(JLOGIC_CLI) + " eval --program " + JLOGIC_CASES + "/nonterminating.jl --instance " + JLOGIC_CASES +
                      "/empty.json > /dev/null 2>&1";
    auto start = Clock::now();
    int status = std::system(cmd.c_str());
    double secs = seconds_since(start);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ostringstream d;
    d << "exit code " << code << ", " << secs << " s";
    return {code == 3 && secs < 10.0, d.str()};
}

} // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
    std::set<std::size_t> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria = {
        {"cartesian product", cartesian},
        {"deep equality", deep_equality},
        {"properness", properness},
        {"chase behaviour", chase_behaviour},
        {"chase soundness fuzzing", chase_soundness},
        {"object-object decider", object_object},
        {"containment", containment},
        {"transformations", transformations},
        {"nontermination guard", nontermination},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!only.empty() && !only.count(i + 1)) continue;
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        failures += !r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << r.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
