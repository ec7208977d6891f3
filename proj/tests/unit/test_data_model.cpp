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

#include "jlogic/errors.hpp"
#include "jlogic/json_io.hpp"
#include "jlogic/object.hpp"

using namespace jlogic;

namespace {

PathValue pv(std::string_view path, std::string_view value) {
    return PathValue{parse_path(path), value == "{}" ? AtomicValue::empty_object() : AtomicValue::atom(value)};
}

ObjectTree person(const char* name, const char* age) {
    ObjectTree t;
    t.set("name", ObjectTree::leaf(name));
    t.set("age", ObjectTree::leaf(age));
    return t;
}

ObjectTree john() {
    ObjectTree children;
    children.set("1", person("anne", "12"));
    children.set("2", person("bob", "18"));
    children.set("3", person("chris", "24"));
    ObjectTree o;
    o.set("name", ObjectTree::leaf("john"));
    o.set("children", children);
    return o;
}

ObjectTree random_tree(std::mt19937& rng, int depth) {
    ObjectTree t;
    int n = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < n; ++i) {
        std::string k(1, char('a' + std::uniform_int_distribution<int>(0, 3)(rng)));
        if (depth > 0 && rng() % 2) t.set(k, random_tree(rng, depth - 1));
        else t.set(k, ObjectTree::leaf(std::string(1, char('0' + rng() % 3))));
    }
    return t;
}

} // namespace

TEST(Key, InterningAndOrder) {
    EXPECT_EQ(Key::atom("a"), Key::atom("a"));
    EXPECT_NE(Key::atom("a"), Key::atom("b"));
    Path ab = parse_path("a.b");
    EXPECT_EQ(Key::packed(ab), Key::packed(parse_path("a.b")));
    EXPECT_TRUE(canonical_compare(Key::atom("z"), Key::packed(ab)) < 0);
    EXPECT_EQ(to_string(parse_path("a.<b.<c>>.\"x y\"")), "a.<b.<c>>.\"x y\"");
    EXPECT_EQ(pack_depth(parse_path("a.<b.<c>>")), 2u);
}

TEST(Flatness, Paths) {
    EXPECT_TRUE(is_flat(parse_path("a.b.c")));
    EXPECT_FALSE(is_flat(parse_path("<a>.b")));
    EXPECT_FALSE(is_flat(parse_path("a.<b.<c>>")));
}

TEST(ObjectDescription, EncodeJohn) {
    ObjectDescription d = od_encode(john());
    ObjectDescription expected{pv("name", "john"),          pv("children.1.name", "anne"), pv("children.1.age", "12"),
                               pv("children.2.name", "bob"), pv("children.2.age", "18"),   pv("children.3.name", "chris"),
                               pv("children.3.age", "24")};
    EXPECT_EQ(d, expected);
    EXPECT_EQ(od_decode(d), john());
}

TEST(ObjectDescription, EncodeTrivial) {
    EXPECT_TRUE(od_encode(ObjectTree()).empty());
    ObjectTree t;
    t.set("a", ObjectTree());
    EXPECT_EQ(od_encode(t), ObjectDescription{pv("a", "{}")});
    EXPECT_EQ(od_decode({}), ObjectTree());
}

TEST(ObjectDescription, ImproperWitnesses) {
    auto fd = is_proper(ObjectDescription{pv("a", "1"), pv("a", "2")});
    ASSERT_FALSE(fd.proper);
    EXPECT_EQ(fd.violations.at(0).kind, ViolationKind::FunctionalDependency);
    auto pre = is_proper(ObjectDescription{pv("a", "1"), pv("a.a", "1")});
    ASSERT_FALSE(pre.proper);
    EXPECT_EQ(pre.violations.at(0).kind, ViolationKind::Prefix);
    EXPECT_THROW(od_decode({pv("a", "1"), pv("a.a", "1")}), ImproperDescription);
    EXPECT_TRUE(is_proper(ObjectDescription{pv("a", "1"), pv("b.c", "{}")}).proper);
}

TEST(ObjectDescription, RoundTripAndCardinality) {
    std::mt19937 rng(7);
    for (int i = 0; i < 300; ++i) {
        ObjectTree t = random_tree(rng, 3);
        ObjectDescription d = od_encode(t);
        EXPECT_TRUE(is_proper(d).proper);
        EXPECT_EQ(d.size(), t.leaf_count());
        EXPECT_EQ(od_decode(d), t);
    }
}

TEST(Instance, PathsAndPermutation) {
    Instance i;
    i.add("R", parse_path("a.b"), AtomicValue::atom("1"));
    i.add("S", parse_path("a.b"), AtomicValue::atom("2"));
    EXPECT_EQ(paths_of(i), std::set<Path>{parse_path("a.b")});

    Instance j;
    j.add("R", parse_path("<a>.b"), AtomicValue::empty_object());
    Instance expected;
    expected.add("R", parse_path("<b>.a"), AtomicValue::empty_object());
    EXPECT_EQ(apply_permutation({{"a", "b"}, {"b", "a"}}, j), expected);
    EXPECT_EQ(apply_permutation({}, j), j);
    EXPECT_THROW(apply_permutation({{"a", "b"}}, j), NotInjectiveOnSupport);
}

TEST(Instance, PermutationComposes) {
    Instance i;
    i.add("R", parse_path("a.<b.c>"), AtomicValue::atom("c"));
    std::map<std::string, std::string> f{{"a", "b"}, {"b", "a"}}, g{{"b", "c"}, {"c", "b"}}, fg;
    for (std::string s : {"a", "b", "c"}) {
        std::string x = g.count(s) ? g[s] : s;
        fg[s] = f.count(x) ? f[x] : x;
    }
    EXPECT_EQ(apply_permutation(fg, i), apply_permutation(f, apply_permutation(g, i)));
}

TEST(JsonIo, TreeAndPairs) {
    Instance i = read_instance(R"({"R": {"a": {"b": 1, "c": {}}}, "S": [{"path": ["x", {"packed": ["a", "b"]}], "value": null}]})");
    EXPECT_TRUE(i.contains("R", pv("a.b", "1")));
    EXPECT_TRUE(i.contains("R", pv("a.c", "{}")));
    EXPECT_TRUE(i.contains("S", pv("x.<a.b>", "{}")));
    std::string pairs = write_instance(i, OutputMode::Pairs);
    EXPECT_EQ(read_instance(pairs), i);
    EXPECT_EQ(read_instance(write_instance(i, OutputMode::Tree)), i);
    EXPECT_THROW(read_instance(R"({"R": [1, 2]})"), FormatError);
    EXPECT_THROW(read_instance(R"({"R": {"a": [1]}})"), FormatError);
}

TEST(JsonIo, NumbersKeepSourceText) {
    Instance i = read_instance(R"({"R": {"a": 2.50, "b": true}})");
    EXPECT_TRUE(i.contains("R", pv("a", "2.50")));
    EXPECT_TRUE(i.contains("R", pv("b", "true")));
}

TEST(JsonIo, Freshened) {
    Instance i;
    i.add("T", parse_path("<a.c>.r"), AtomicValue::atom("1"));
    i.add("T", parse_path("<b.c>.r"), AtomicValue::atom("2"));
    i.add("T", parse_path("<a.c>.s"), AtomicValue::atom("3"));
    Instance f = freshen_packed_keys(i, "t");
    EXPECT_TRUE(f.contains("T", pv("t1.r", "1")));
    EXPECT_TRUE(f.contains("T", pv("t1.s", "3")));
    EXPECT_TRUE(f.contains("T", pv("t2.r", "2")));
}
