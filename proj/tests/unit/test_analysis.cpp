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

#include <gtest/gtest.h>

#include <random>

#include "jlogic/analysis.hpp"
#include "jlogic/checks.hpp"
#include "jlogic/desugar.hpp"
#include "jlogic/eval.hpp"
#include "jlogic/json_io.hpp"
#include "jlogic/parser.hpp"
#include "testing.hpp"

using namespace jlogic;
using namespace jlogic::testing;

namespace {

using OO = ObjectObjectVerdict::Kind;
using CK = ContainmentVerdict::Kind;

Program single(const Rule& r) {
    Program p;
    p.rules.push_back(r);
    p.declared_inputs = std::set<std::string>{"R"};
    p.declared_outputs = std::set<std::string>{"S"};
    return p;
}


} // namespace

TEST(Unfold, InlinesDerivedRelations) {
    Program p = parse_program("output S.\nT($x.b:%u) :- R(a.$x:%u).\nS(c.$y:{}) :- T($y:@u).\n");
    auto rs = unfold(desugar(p), {"S"});
    ASSERT_EQ(rs.size(), 1u);
    auto out = eval_rule(rs[0], instance({fact("R", "a.k.b", "1"), fact("R", "a.m", "{}")}));
    EXPECT_EQ(out, (std::set<Fact>{fact("S", "c.k.b.b", "{}")}));
}

TEST(ObjectObject, TopLayerStrippingIsNotObjectObject) {
    auto v = decide_object_object(parse_program("S($y:%u) :- R(#x.$y:%u)."));
    ASSERT_EQ(v.kind, OO::No) << v.reason;
    EXPECT_TRUE(v.delta == 1 || v.delta >= 3) << v.delta;
    ASSERT_TRUE(v.counterexample.has_value());
    EXPECT_TRUE(v.verified) << write_instance(*v.counterexample, OutputMode::Pairs);
}

TEST(ObjectObject, UnnestingIsObjectObject) {
    auto v = decide_object_object(parse_program("S(<$x>.$y:%u) :- R($x.name:John), R($x.$y:%u)."));
    EXPECT_EQ(v.kind, OO::Yes) << v.reason;
    EXPECT_GT(v.checked, 0u);
}

TEST(ObjectObject, TrivialAndUnsupported) {
    Program empty;
    empty.declared_inputs = std::set<std::string>{"R"};
    empty.declared_outputs = std::set<std::string>{};
    EXPECT_EQ(decide_object_object(empty).kind, OO::Yes);
    EXPECT_EQ(decide_object_object(parse_program("S($x:{}) :- R($x:{}), not R(a:{}).")).kind, OO::Unsupported);
    EXPECT_EQ(decide_object_object(parse_program("S($x:{}) :- R($x:{}).\nS(a.$x:{}) :- S($x:{}).")).kind, OO::Unsupported);
    EXPECT_EQ(decide_object_object(parse_program("S($x.$x:{}) :- R($x:{}).")).kind, OO::Unsupported);
    EXPECT_EQ(decide_object_object(parse_program("S($x:{}) :- R($x:{}), a.$x = $x.a.")).kind, OO::Unsupported);
}

TEST(ObjectObject, SimpleVerdicts) {
    EXPECT_EQ(decide_object_object(parse_program("S($x:%u) :- R($x:%u).")).kind, OO::Yes);
    EXPECT_EQ(decide_object_object(parse_program("S($y:%u) :- R(a.$y:%u).")).kind, OO::Yes);
    EXPECT_EQ(decide_object_object(parse_program("S(c.$x:%u) :- R($x:%u).\nS(d.$x:%u) :- R($x:%u).")).kind, OO::Yes);
    EXPECT_EQ(decide_object_object(parse_program("S(c:%u) :- R($x:%u).")).kind, OO::No);
    EXPECT_EQ(decide_object_object(parse_program("S(c.$x:%u) :- R($x:%u).\nS(c:{}) :- R($x:%u).")).kind, OO::No);
}

TEST(ObjectObject, VerdictsAgreeWithEvaluation) {
    RandomPositive gen(77);
    std::mt19937 rng(78);
    int yes = 0, no = 0, no_verified = 0;
    for (int n = 0; n < 80; ++n) {
        Program p = gen.program();
        auto v = decide_object_object(p);
        ASSERT_NE(v.kind, OO::Unsupported) << to_string(p) << v.reason;
        if (v.kind == OO::Yes) {
            ++yes;
            for (int k = 0; k < 60; ++k) {
                Instance i = proper_input(rng, 3);
                EXPECT_TRUE(is_proper(eval_query(p, i))) << to_string(p) << write_instance(i, OutputMode::Pairs);
            }
        } else {
            ++no;
            ASSERT_TRUE(v.counterexample.has_value());
            EXPECT_TRUE(is_proper(*v.counterexample));
            if (v.verified) ++no_verified;
        }
    }
    EXPECT_GT(yes, 5);
    EXPECT_GT(no, 5);
    EXPECT_EQ(no_verified, no);
}

TEST(Variants, CountAndShape) {
    Rule r1 = parse_rule("S(c:{}) :- R($x.$y:{}).");
    EXPECT_EQ(enumerate_variants(r1, 3).size(), 9u);
    Rule plain = parse_rule("S(@x:{}) :- R(@x.a:{}).");
    auto vs = enumerate_variants(plain, 4);
    ASSERT_EQ(vs.size(), 1u);
    EXPECT_EQ(vs[0].rule, plain);
    auto v = make_variant(r1, {{Variable{VarSort::Path, "x"}, 2}, {Variable{VarSort::Path, "y"}, 3}});
    EXPECT_EQ(to_string(v.rule), "S(c:{}) :- R(@x^1.@x^2.@y^1.@y^2.@y^3:{}).");
}

TEST(Containment, PackedVariantsRemark) {
    Rule r1 = parse_rule("S(c:{}) :- R($x.$y:{}).");
    Program p2 = parse_program("S(c:{}) :- R(@u.$z:{}).");
    auto v = decide_containment_flat(r1, p2);
    EXPECT_EQ(v.kind, CK::Contained) << v.reason;
    Instance packed = instance({Fact{"R", Path{Key::packed(parse_path("a")), Key::atom("b")}, AtomicValue::empty_object()}});
    EXPECT_EQ(eval_rule(r1, packed).size(), 1u);
    EXPECT_TRUE(eval_query(p2, packed).relation("S").empty());
}

TEST(Containment, PatternPairs) {
    Rule e1 = parse_rule("S($x.$y:{}) :- R($x.$y:{}).");
    Rule e2 = parse_rule("S(@x.$y:{}) :- R(@x.$y:{}).");
    EXPECT_EQ(decide_containment_flat(e1, single(e2)).kind, CK::Contained);
    EXPECT_EQ(decide_containment_flat(e2, single(e1)).kind, CK::Contained);
    Rule e3 = parse_rule("S(@x.$y.@z:{}) :- R(@x.$y.@z:{}).");
    Rule e4 = parse_rule("S($u.@v.$w:{}) :- R($u.@v.$w:{}).");
    EXPECT_EQ(decide_containment_flat(e3, single(e4)).kind, CK::Contained);
    EXPECT_EQ(decide_containment_flat(e4, single(e3)).kind, CK::Contained);
    // Neither maps into the other, and a weak mapping is not enough.
    EXPECT_EQ(decide_containment_flat(parse_rule("S($x:{}) :- R($x:{})."), single(parse_rule("S(@x:{}) :- R(@x:{}).")))
                  .kind,
              CK::NotContained);
}

TEST(Containment, SelfAndWitness) {
    RandomPositive gen(4);
    for (int n = 0; n < 30; ++n) {
        Rule r = gen.rule(2, true);
        EXPECT_EQ(decide_containment_flat(r, single(r)).kind, CK::Contained) << to_string(r);
    }
    auto v = decide_containment_flat(parse_rule("S($x:{}) :- R($x:{})."), parse_program("S(@u.$y:{}) :- R(@u.$y:{})."));
    ASSERT_EQ(v.kind, CK::NotContained);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.witness->lengths.begin()->second, 1u);
    EXPECT_TRUE(v.verified);
    EXPECT_EQ(decide_containment_flat(parse_rule("S(c:{}) :- R(<$x>:{})."), single(parse_rule("S(c:{}) :- R($x:{}).")))
                  .kind,
              CK::PreconditionFailed);
}

TEST(Containment, ProperFlat) {
    Rule fd = parse_rule("S($x.@i.@j:{}) :- R($x:@i), R($x:@j).");
    auto chased = chase_rule(fd, delta_for("R"));
    ASSERT_TRUE(chased.has_value());
    EXPECT_EQ(chased->head.path[1], chased->head.path[2]);
    Program same = parse_program("S($x.@i.@i:{}) :- R($x:@i).");
    EXPECT_EQ(decide_containment_flat(fd, same).kind, CK::NotContained);
    EXPECT_EQ(decide_containment_proper_flat(fd, same).kind, CK::Contained);

    Rule prefix = parse_rule("S(c:{}) :- R($x:@i), R($x.$y:@j).");
    EXPECT_FALSE(chase_rule(prefix, delta_for("R")).has_value());
    EXPECT_EQ(decide_containment_proper_flat(prefix, parse_program("S(d:{}) :- R(a:{}).")).kind, CK::Contained);

    Rule neutral = parse_rule("S($y:{}) :- R(a.$y:{}).");
    Program p2 = parse_program("S($y:{}) :- R(@u.$y:{}).");
    EXPECT_EQ(decide_containment_proper_flat(neutral, p2).kind, decide_containment_flat(neutral, p2).kind);
}

TEST(Containment, VerdictsSurviveExhaustiveSearch) {
    RandomPositive gen(91);
    int contained = 0, not_contained = 0;
    for (int n = 0; n < 120; ++n) {
        Rule r2 = gen.rule(2, false);
        Rule r1 = gen.pick(2) ? gen.specialize(r2) : gen.rule(2, false);
        if (r1.body.size() > 2) r1.body.resize(2);
        if (!check_safety(r1).safe) continue;
        Program p2 = single(r2);
        auto v = decide_containment_flat(r1, p2);
        ASSERT_NE(v.kind, CK::PreconditionFailed) << v.reason;
        if (v.kind == CK::NotContained) {
            ++not_contained;
            EXPECT_TRUE(v.verified) << to_string(r1) << " vs " << to_string(r2);
            continue;
        }
        ++contained;
        std::size_t m = atomic_count(p2);
        std::vector<std::string> alphabet;
        for (std::size_t k = 0; k < m + 2; ++k) alphabet.push_back(std::string(1, char('a' + k)));
        auto cex = containment_counterexample(r1, p2, alphabet, m + 2);
        EXPECT_FALSE(cex.has_value()) << to_string(r1) << " vs " << to_string(r2) << "\n"
                                      << (cex ? write_instance(*cex, OutputMode::Pairs) : "");
    }
    EXPECT_GT(contained, 15);
    EXPECT_GT(not_contained, 15);
}

TEST(Containment, LengthBoundIsSufficient) {
    RandomPositive gen(12);
    for (int n = 0; n < 80; ++n) {
        Rule r2 = gen.rule(2, false);
        Rule r1 = gen.pick(2) ? gen.specialize(r2) : gen.rule(1, false);
        if (!check_safety(r1).safe) continue;
        Program p2 = single(r2);
        std::size_t m = atomic_count(p2);
        auto a = decide_containment_flat(r1, p2);
        ContainmentOptions wide;
        wide.max_length = m + 3;
        auto b = decide_containment_flat(r1, p2, wide);
        EXPECT_EQ(a.kind, b.kind) << to_string(r1) << " vs " << to_string(r2);
    }
}
