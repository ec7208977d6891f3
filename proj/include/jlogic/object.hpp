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

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jlogic/key.hpp"

namespace jlogic {

/// A JSON-like object tree: a finite mapping from keys to values, where a
/// value is an atomic key or an object in turn. A node is either an atomic
/// leaf or an object; the empty object is an object node with no entries.
class ObjectTree {
public:
    ObjectTree() = default;
    static ObjectTree leaf(Key atomic_key);
    static ObjectTree leaf(std::string_view symbol) { return leaf(Key::atom(symbol)); }

    bool is_atomic() const { return atom_.has_value(); }
    bool is_object() const { return !atom_.has_value(); }
    /// Precondition: is_atomic().
    Key atom() const { return *atom_; }

    const std::map<Key, ObjectTree>& entries() const { return entries_; }

    /// Adds or replaces an entry; the node must be an object.
    ObjectTree& set(Key key, ObjectTree value);
    ObjectTree& set(std::string_view key, ObjectTree value) { return set(Key::atom(key), std::move(value)); }

    /// Number of leaves (atomic leaves plus empty-object leaves below the root).
    std::size_t leaf_count() const;

    friend bool operator==(const ObjectTree&, const ObjectTree&) = default;

private:
    std::optional<Key> atom_;
    std::map<Key, ObjectTree> entries_;
};

struct PathValue {
    Path path;
    AtomicValue value;

    friend bool operator==(const PathValue&, const PathValue&) = default;
    friend auto operator<=>(const PathValue&, const PathValue&) = default;
};

/// A set of path:value pairs. Ordered by the internal key order; use
/// canonical_pairs() for output.
using ObjectDescription = std::set<PathValue>;

std::vector<PathValue> canonical_pairs(const ObjectDescription& d);

struct Fact {
    std::string relation;
    Path path;
    AtomicValue value;

    friend bool operator==(const Fact&, const Fact&) = default;
    friend auto operator<=>(const Fact&, const Fact&) = default;
};

std::string to_string(const Fact& f);

/// Named object descriptions. A relation that is present but empty is
/// distinct from an absent one only for vocabulary bookkeeping.
class Instance {
public:
    Instance() = default;

    void add(const std::string& relation, Path path, AtomicValue value);
    void add(const Fact& f) { add(f.relation, f.path, f.value); }
    bool insert(const std::string& relation, PathValue pv);
    /// Ensures a (possibly empty) relation entry exists.
    void declare(const std::string& relation) { relations_[relation]; }

    bool contains(const std::string& relation, const PathValue& pv) const;
    bool contains(const Fact& f) const { return contains(f.relation, PathValue{f.path, f.value}); }

    const ObjectDescription& relation(const std::string& name) const;
    const std::map<std::string, ObjectDescription>& relations() const { return relations_; }
    std::map<std::string, ObjectDescription>& relations() { return relations_; }

    std::vector<Fact> facts() const;
    std::size_t size() const;

    /// Keeps only the named relations.
    Instance restricted_to(const std::set<std::string>& names) const;

    friend bool operator==(const Instance& a, const Instance& b);

private:
    std::map<std::string, ObjectDescription> relations_;
};

/// The object description of an object tree. Precondition: o is an object.
ObjectDescription od_encode(const ObjectTree& o);

enum class ViolationKind { FunctionalDependency, Prefix };

struct ProperViolation {
    ViolationKind kind;
    PathValue first;
    PathValue second;
};

struct ProperReport {
    bool proper = true;
    std::vector<ProperViolation> violations;
    explicit operator bool() const { return proper; }
};

/// Checks the path->value functional dependency and prefix-freeness.
/// When `all` is false, stops at the first violation.
ProperReport is_proper(const ObjectDescription& d, bool all = false);
bool is_proper(const Instance& i);

/// The unique object whose description is d. Throws ImproperDescription.
ObjectTree od_decode(const ObjectDescription& d);

std::set<Path> paths_of(const Instance& i);

/// Applies a bijection on atomic symbols (identity outside its domain) to
/// every atomic key occurrence. Throws NotInjectiveOnSupport when the
/// extended map collides on the symbols of i.
Instance apply_permutation(const std::map<std::string, std::string>& f, const Instance& i);
Path apply_permutation(const std::map<std::string, std::string>& f, std::span<const Key> path);

bool is_flat(const ObjectDescription& d);
bool is_flat(const Instance& i);

/// Every atomic symbol in paths, packed keys and values.
std::set<std::string> atoms_of(const Instance& i);

} // namespace jlogic
