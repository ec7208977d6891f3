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

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jlogic {

class Key;

/// A path is a nonempty sequence of keys. The vector type itself does not
/// enforce nonemptiness; constructors at API boundaries check it.
using Path = std::vector<Key>;

/// A key: either an atomic key (a symbol) or a packed key wrapping a path.
///
/// Keys are hash-consed: two keys are equal iff their handles are equal.
/// The handle order is an internal, process-local order; use
/// canonical_compare() for anything that is written out.
class Key {
public:
    /// The placeholder key (the reserved empty symbol); not a valid atomic key.
    Key() = default;

    static Key atom(std::string_view symbol);
    static Key packed(std::span<const Key> inner);

    bool is_atomic() const { return (raw_ & kPackedBit) == 0; }
    bool is_packed() const { return (raw_ & kPackedBit) != 0; }

    /// Symbol of an atomic key. Precondition: is_atomic().
    const std::string& symbol() const;
    /// Inner path of a packed key. Precondition: is_packed().
    std::span<const Key> inner() const;

    std::uint32_t raw() const { return raw_; }

    friend bool operator==(Key a, Key b) = default;
    friend auto operator<=>(Key a, Key b) = default;

private:
    static constexpr std::uint32_t kPackedBit = 0x80000000u;
    explicit Key(std::uint32_t raw) : raw_(raw) {}
    std::uint32_t raw_ = 0;
};

/// Leaf label of an object description: an atomic key or the empty object.
class AtomicValue {
public:
    static AtomicValue empty_object() { return AtomicValue(); }
    static AtomicValue of(Key atomic_key);
    static AtomicValue atom(std::string_view symbol) { return of(Key::atom(symbol)); }

    bool is_empty_object() const { return empty_; }
    /// Precondition: !is_empty_object().
    const Key& key() const { return key_; }

    friend bool operator==(const AtomicValue&, const AtomicValue&) = default;
    friend auto operator<=>(const AtomicValue&, const AtomicValue&) = default;

private:
    AtomicValue() = default;
    // Internal order only: atomic keys sort before the empty object.
    bool empty_ = true;
    Key key_;
};

/// Canonical order: atomic < packed, atomic keys by byte-wise symbol order,
/// packed keys and paths lexicographically.
std::strong_ordering canonical_compare(Key a, Key b);
std::strong_ordering canonical_compare(std::span<const Key> a, std::span<const Key> b);
std::strong_ordering canonical_compare(const AtomicValue& a, const AtomicValue& b);

struct CanonicalPathLess {
    bool operator()(const Path& a, const Path& b) const { return canonical_compare(a, b) < 0; }
};

/// Text rendering: atomic keys print as their symbol (quoted when they are
/// not plain identifiers), packed keys as <k1.k2>, paths dot-separated,
/// the empty object as {}.
std::string to_string(Key k);
std::string to_string(std::span<const Key> path);
std::string to_string(const AtomicValue& v);

/// Parses the text rendering of a path back. Throws SyntaxError.
Path parse_path(std::string_view text);

/// Nesting depth of packing: 0 for flat keys/paths.
std::size_t pack_depth(Key k);
std::size_t pack_depth(std::span<const Key> path);

/// True iff no packed key occurs.
bool is_flat(Key k);
bool is_flat(std::span<const Key> path);

/// Calls f on every atomic key occurring in the path, including inside packing.
void for_each_atom(std::span<const Key> path, const std::function<void(Key)>& f);

/// All nonempty contiguous subpaths, including those of packed keys' inner paths.
void collect_subpaths(std::span<const Key> path, std::vector<Path>& out);

/// True when s can be printed without quotes.
bool is_plain_symbol(std::string_view s);

struct KeyHash {
    std::size_t operator()(Key k) const noexcept { return std::hash<std::uint32_t>{}(k.raw()); }
};

struct PathHash {
    std::size_t operator()(std::span<const Key> p) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (Key k : p) {
            h ^= k.raw();
            h *= 1099511628211ull;
        }
        return h;
    }
    std::size_t operator()(const Path& p) const noexcept { return (*this)(std::span<const Key>(p)); }
};

} // namespace jlogic
