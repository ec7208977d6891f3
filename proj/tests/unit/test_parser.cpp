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

#include "jlogic/errors.hpp"
#include "jlogic/parser.hpp"

using namespace jlogic;

TEST(Parser, CartesianRule) {
    Rule r = parse_rule("T(<@x.@y>.r.@x.$x1 : @u) :- R(@x.$x1:@u), S(@y.$y1:@v).");
    EXPECT_EQ(r.head.relation, "T");
    ASSERT_EQ(r.head.path.size(), 4u);
    EXPECT_TRUE(r.head.path[0].is_packed());
    EXPECT_EQ(r.body.size(), 2u);
    EXPECT_EQ(to_string(r), "T(<@x.@y>.r.@x.$x1:@u) :- R(@x.$x1:@u), S(@y.$y1:@v).");
}

TEST(Parser, FactRule) {
    Rule r = parse_rule("S(a:{}) :- .");
    EXPECT_TRUE(r.body.empty());
    EXPECT_TRUE(r.head.value.is_empty_object());
    EXPECT_EQ(parse_rule("S(a:{})."), r);
}

TEST(Parser, EqualityAndSugar) {
    Rule r = parse_rule("S($x:%u) :- R($x:%u), a.$x = $x.a.");
    ASSERT_EQ(r.body.size(), 2u);
    ASSERT_TRUE(r.body[1].is_equality());
    EXPECT_EQ(r.body[1].equality().lhs.size(), 2u);
    EXPECT_EQ(r.head.value.var.sort, VarSort::Value);
}

TEST(Parser, ProgramWithCommentsAndNegation) {
    Program p = parse_program(R"(
% comment line
input R.
output Q.
T($x:%u) :- R(a.$x:%u), not R(b.$x:%u).   % trailing
Q(yes:{}) :- !T($x:@u), R($x:@u), $x != a.
Q(no:{}) :- ¬T(a:{}), @a ≠ b, R(@a:{}).
)");
    ASSERT_EQ(p.rules.size(), 3u);
    EXPECT_TRUE(p.rules[0].body[1].negated);
    EXPECT_TRUE(p.rules[1].body[0].negated);
    EXPECT_TRUE(p.rules[1].body[2].negated);
    EXPECT_TRUE(p.rules[1].body[2].is_equality());
    EXPECT_EQ(*p.declared_inputs, std::set<std::string>{"R"});
    EXPECT_EQ(p.vocab_out(), std::set<std::string>{"Q"});
    EXPECT_EQ(parse_program(to_string(p)).rules, p.rules);
}

TEST(Parser, EqualityEndingRuleBeforeNextRule) {
    Program p = parse_program("S($y:{}) :- R($x:{}), $x = a.$y.\nT(a:{}) :- .");
    ASSERT_EQ(p.rules.size(), 2u);
    EXPECT_EQ(p.rules[0].body[1].equality().rhs.size(), 2u);
}

TEST(Parser, Jaegds) {
    auto js = parse_jaegds("D($x:@i), D($x:@j) -> @i = @j.\nD($x:@i), D($x.$y:@j) -> false.");
    ASSERT_EQ(js.size(), 2u);
    EXPECT_FALSE(js[0].consequent.bottom);
    EXPECT_TRUE(js[1].consequent.bottom);
    EXPECT_EQ(to_string(js[0]), "D($x:@i), D($x:@j) -> @i = @j.");
}

TEST(Parser, Errors) {
    try {
        parse_program("S(a:{}) :- R(a:{})\nT(b:{}).");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse_rule("S(a.%u:{})."), SyntaxError);
    EXPECT_THROW(parse_rule("S(a:{}"), SyntaxError);
}
