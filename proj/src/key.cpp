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

#include "jlogic/key.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "jlogic/errors.hpp"

namespace jlogic {

namespace {

// Append-only chunked storage: element addresses never move, so readers can
// dereference a published handle without taking the lock.
template <typename T>
class ChunkedStore {
public:
    static constexpr std::size_t kChunkBits = 12;
    static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
    static constexpr std::size_t kMaxChunks = std::size_t{1} << 19;

    ChunkedStore() : chunks_(new std::atomic<T*>[kMaxChunks]) {
        for (std::size_t i = 0; i < kMaxChunks; ++i) chunks_[i].store(nullptr, std::memory_order_relaxed);
    }
    ~ChunkedStore() {
        for (std::size_t i = 0; i < kMaxChunks; ++i) delete[] chunks_[i].load(std::memory_order_relaxed);
    }

    // Caller holds the writer lock.
    std::uint32_t push(T value) {
        std::size_t index = size_;
        std::size_t chunk = index >> kChunkBits;
        if (chunk >= kMaxChunks) throw Error("key table exhausted");
        T* block = chunks_[chunk].load(std::memory_order_relaxed);
        if (block == nullptr) {
            block = new T[kChunkSize];
            chunks_[chunk].store(block, std::memory_order_release);
        }
        block[index & (kChunkSize - 1)] = std::move(value);
        ++size_;
        return static_cast<std::uint32_t>(index);
    }

    const T& get(std::uint32_t index) const {
        return chunks_[index >> kChunkBits].load(std::memory_order_acquire)[index & (kChunkSize - 1)];
    }

private:
    std::unique_ptr<std::atomic<T*>[]> chunks_;
    std::size_t size_ = 0;
};

struct SpanHash {
    using is_transparent = void;
    std::size_t operator()(std::span<const Key> p) const noexcept { return PathHash{}(p); }
};

struct SpanEq {
    using is_transparent = void;
    bool operator()(std::span<const Key> a, std::span<const Key> b) const noexcept {
        return std::equal(a.begin(), a.end(), b.begin(), b.end());
    }
};

class KeyTable {
public:
    KeyTable() { intern_atom(""); }

    std::uint32_t intern_atom(std::string_view symbol) {
        std::lock_guard lock(mutex_);
        auto it = atom_ids_.find(std::string(symbol));
        if (it != atom_ids_.end()) return it->second;
        std::uint32_t id = atoms_.push(std::string(symbol));
        atom_ids_.emplace(std::string(symbol), id);
        return id;
    }

    std::uint32_t intern_pack(std::span<const Key> inner) {
        std::lock_guard lock(mutex_);
        auto it = pack_ids_.find(Path(inner.begin(), inner.end()));
        if (it != pack_ids_.end()) return it->second;
        std::uint32_t id = packs_.push(Path(inner.begin(), inner.end()));
        pack_ids_.emplace(Path(inner.begin(), inner.end()), id);
        return id;
    }

    const std::string& atom(std::uint32_t id) const { return atoms_.get(id); }
    const Path& pack(std::uint32_t id) const { return packs_.get(id); }

private:
    std::mutex mutex_;
    ChunkedStore<std::string> atoms_;
    ChunkedStore<Path> packs_;
    std::unordered_map<std::string, std::uint32_t> atom_ids_;
    std::unordered_map<Path, std::uint32_t, PathHash> pack_ids_;
};

KeyTable& table() {
    static KeyTable* instance = new KeyTable();
    return *instance;
}

} // namespace

Key Key::atom(std::string_view symbol) { return Key(table().intern_atom(symbol)); }

Key Key::packed(std::span<const Key> inner) {
    if (inner.empty()) throw Error("packed key requires a nonempty path");
    return Key(table().intern_pack(inner) | kPackedBit);
}

const std::string& Key::symbol() const {
    assert(is_atomic());
    return table().atom(raw_);
}

std::span<const Key> Key::inner() const {
    assert(is_packed());
    return table().pack(raw_ & ~kPackedBit);
}

AtomicValue AtomicValue::of(Key atomic_key) {
    if (!atomic_key.is_atomic()) throw Error("atomic value must be an atomic key");
    AtomicValue v;
    v.empty_ = false;
    v.key_ = atomic_key;
    return v;
}

std::strong_ordering canonical_compare(Key a, Key b) {
    if (a == b) return std::strong_ordering::equal;
    if (a.is_atomic() != b.is_atomic()) return a.is_atomic() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_atomic()) return a.symbol().compare(b.symbol()) <=> 0;
    return canonical_compare(a.inner(), b.inner());
}

std::strong_ordering canonical_compare(std::span<const Key> a, std::span<const Key> b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto c = canonical_compare(a[i], b[i]);
        if (c != 0) return c;
    }
    return a.size() <=> b.size();
}

std::strong_ordering canonical_compare(const AtomicValue& a, const AtomicValue& b) {
    if (a.is_empty_object() || b.is_empty_object()) return b.is_empty_object() <=> a.is_empty_object();
    return canonical_compare(a.key(), b.key());
}

bool is_plain_symbol(std::string_view s) {
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        bool ok = std::isalnum(c) || c == '_' || (i > 0 && (c == '\'' || c == '^'));
        if (!ok) return false;
    }
    return true;
}

namespace {

void append_quoted(std::string& out, std::string_view s) {
    out += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
}

void append_key(std::string& out, Key k);

void append_path(std::string& out, std::span<const Key> path) {
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i > 0) out += '.';
        append_key(out, path[i]);
    }
}

void append_key(std::string& out, Key k) {
    if (k.is_atomic()) {
        if (is_plain_symbol(k.symbol())) out += k.symbol();
        else append_quoted(out, k.symbol());
        return;
    }
    out += '<';
    append_path(out, k.inner());
    out += '>';
}

} // namespace

std::string to_string(Key k) {
    std::string out;
    append_key(out, k);
    return out;
}

std::string to_string(std::span<const Key> path) {
    std::string out;
    append_path(out, path);
    return out;
}

std::string to_string(const AtomicValue& v) {
    return v.is_empty_object() ? std::string("{}") : to_string(v.key());
}

namespace {

class PathReader {
public:
    explicit PathReader(std::string_view text) : text_(text) {}

    Path read_all() {
        Path p = read_path();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    Path read_path() {
        Path p;
        p.push_back(read_key());
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            p.push_back(read_key());
            skip_ws();
        }
        return p;
    }

    Key read_key() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected a key");
        char c = text_[pos_];
        if (c == '<') {
            ++pos_;
            Path inner = read_path();
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != '>') fail("expected '>'");
            ++pos_;
            return Key::packed(inner);
        }
        if (c == '"') {
            ++pos_;
            std::string s;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
                s += text_[pos_++];
            }
            if (pos_ >= text_.size()) fail("unterminated string");
            ++pos_;
            if (s.empty()) fail("atomic keys are nonempty");
            return Key::atom(s);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            unsigned char ch = static_cast<unsigned char>(text_[pos_]);
            if (std::isalnum(ch) || ch == '_' || ((ch == '\'' || ch == '^') && pos_ > start)) ++pos_;
            else break;
        }
        if (pos_ == start) fail("expected a key");
        return Key::atom(text_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, 1, pos_ + 1); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Path parse_path(std::string_view text) { return PathReader(text).read_all(); }

std::size_t pack_depth(Key k) { return k.is_atomic() ? 0 : 1 + pack_depth(k.inner()); }

std::size_t pack_depth(std::span<const Key> path) {
    std::size_t d = 0;
    for (Key k : path) d = std::max(d, pack_depth(k));
    return d;
}

bool is_flat(Key k) { return k.is_atomic(); }

bool is_flat(std::span<const Key> path) {
    return std::all_of(path.begin(), path.end(), [](Key k) { return k.is_atomic(); });
}

void for_each_atom(std::span<const Key> path, const std::function<void(Key)>& f) {
    for (Key k : path) {
        if (k.is_atomic()) f(k);
        else for_each_atom(k.inner(), f);
    }
}

void collect_subpaths(std::span<const Key> path, std::vector<Path>& out) {
    for (std::size_t i = 0; i < path.size(); ++i) {
        for (std::size_t j = i + 1; j <= path.size(); ++j) out.emplace_back(path.begin() + i, path.begin() + j);
        if (path[i].is_packed()) collect_subpaths(path[i].inner(), out);
    }
}

const char* to_string(LimitKind kind) {
    switch (kind) {
    case LimitKind::DerivedFacts: return "max_derived_facts";
    case LimitKind::PathLength: return "max_path_length";
    case LimitKind::PackDepth: return "max_pack_depth";
    }
    return "unknown";
}

} // namespace jlogic
