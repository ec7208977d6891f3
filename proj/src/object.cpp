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

#include "jlogic/object.hpp"

#include <algorithm>
#include <unordered_map>

#include "jlogic/errors.hpp"

namespace jlogic {

ObjectTree ObjectTree::leaf(Key atomic_key) {
    if (!atomic_key.is_atomic()) throw Error("leaf must be an atomic key");
    ObjectTree t;
    t.atom_ = atomic_key;
    return t;
}

ObjectTree& ObjectTree::set(Key key, ObjectTree value) {
    if (is_atomic()) throw Error("cannot add an entry to an atomic leaf");
    entries_.insert_or_assign(key, std::move(value));
    return *this;
}

std::size_t ObjectTree::leaf_count() const {
    std::size_t n = 0;
    for (const auto& [k, v] : entries_) n += (v.is_atomic() || v.entries_.empty()) ? 1 : v.leaf_count();
    return n;
}

std::vector<PathValue> canonical_pairs(const ObjectDescription& d) {
    std::vector<PathValue> out(d.begin(), d.end());
    std::sort(out.begin(), out.end(), [](const PathValue& a, const PathValue& b) {
        auto c = canonical_compare(a.path, b.path);
        if (c != 0) return c < 0;
        return canonical_compare(a.value, b.value) < 0;
    });
    return out;
}

std::string to_string(const Fact& f) {
    return f.relation + "(" + to_string(f.path) + ":" + to_string(f.value) + ")";
}

void Instance::add(const std::string& relation, Path path, AtomicValue value) {
    insert(relation, PathValue{std::move(path), value});
}

bool Instance::insert(const std::string& relation, PathValue pv) {
    if (pv.path.empty()) throw Error("paths are nonempty");
    return relations_[relation].insert(std::move(pv)).second;
}

bool Instance::contains(const std::string& relation, const PathValue& pv) const {
    auto it = relations_.find(relation);
    return it != relations_.end() && it->second.count(pv) > 0;
}

const ObjectDescription& Instance::relation(const std::string& name) const {
    static const ObjectDescription empty;
    auto it = relations_.find(name);
    return it == relations_.end() ? empty : it->second;
}

std::vector<Fact> Instance::facts() const {
    std::vector<Fact> out;
    for (const auto& [name, od] : relations_)
        for (const auto& pv : od) out.push_back(Fact{name, pv.path, pv.value});
    return out;
}

std::size_t Instance::size() const {
    std::size_t n = 0;
    for (const auto& [name, od] : relations_) n += od.size();
    return n;
}

Instance Instance::restricted_to(const std::set<std::string>& names) const {
    Instance out;
    for (const auto& name : names) {
        auto it = relations_.find(name);
        if (it != relations_.end()) out.relations_[name] = it->second;
        else out.relations_[name];
    }
    return out;
}

bool operator==(const Instance& a, const Instance& b) {
    // Empty relations compare equal to absent ones.
    auto nonempty = [](const Instance& i) {
        std::map<std::string, const ObjectDescription*> m;
        for (const auto& [n, od] : i.relations_)
            if (!od.empty()) m[n] = &od;
        return m;
    };
    auto ma = nonempty(a), mb = nonempty(b);
    if (ma.size() != mb.size()) return false;
    for (auto ia = ma.begin(), ib = mb.begin(); ia != ma.end(); ++ia, ++ib)
        if (ia->first != ib->first || *ia->second != *ib->second) return false;
    return true;
}

namespace {

void encode_into(const ObjectTree& o, Path& prefix, ObjectDescription& out) {
    for (const auto& [k, v] : o.entries()) {
        prefix.push_back(k);
        if (v.is_atomic()) out.insert(PathValue{prefix, AtomicValue::of(v.atom())});
        else if (v.entries().empty()) out.insert(PathValue{prefix, AtomicValue::empty_object()});
        else encode_into(v, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

ObjectDescription od_encode(const ObjectTree& o) {
    if (o.is_atomic()) throw Error("od_encode expects an object, not an atomic key");
    ObjectDescription out;
    Path prefix;
    encode_into(o, prefix, out);
    return out;
}

ProperReport is_proper(const ObjectDescription& d, bool all) {
    ProperReport report;
    auto record = [&](ViolationKind kind, const PathValue& a, const PathValue& b) {
        report.proper = false;
        report.violations.push_back(ProperViolation{kind, a, b});
        return !all;
    };
    // Functional dependency: same path, different value.
    std::unordered_map<Path, const PathValue*, PathHash> by_path;
    for (const auto& pv : d) {
        auto [it, fresh] = by_path.emplace(pv.path, &pv);
        if (!fresh && record(ViolationKind::FunctionalDependency, *it->second, pv)) return report;
    }
    // Prefix-freeness: no stored path is a proper prefix of another.
    for (const auto& pv : d) {
        for (std::size_t len = 1; len < pv.path.size(); ++len) {
            Path prefix(pv.path.begin(), pv.path.begin() + static_cast<std::ptrdiff_t>(len));
            auto it = by_path.find(prefix);
            if (it != by_path.end() && record(ViolationKind::Prefix, *it->second, pv)) return report;
        }
    }
    return report;
}

bool is_proper(const Instance& i) {
    return std::all_of(i.relations().begin(), i.relations().end(),
                       [](const auto& entry) { return is_proper(entry.second).proper; });
}

namespace {

std::string describe(const ProperViolation& v) {
    std::string kind = v.kind == ViolationKind::FunctionalDependency ? "functional dependency" : "prefix-freeness";
    return kind + " violated by " + to_string(v.first.path) + ":" + to_string(v.first.value) + " and " +
           to_string(v.second.path) + ":" + to_string(v.second.value);
}

// Builds the object for the pairs whose paths start at `depth`. Pairs with a
// path of length depth+1 give the direct entries (K1); longer ones are
// grouped by their next key (K2) and decoded recursively.
ObjectTree decode_range(std::vector<const PathValue*>& pairs, std::size_t depth) {
    ObjectTree o;
    std::map<Key, std::vector<const PathValue*>> nested;
    for (const PathValue* pv : pairs) {
        Key k = pv->path[depth];
        if (pv->path.size() == depth + 1) {
            if (pv->value.is_empty_object()) o.set(k, ObjectTree());
            else o.set(k, ObjectTree::leaf(pv->value.key()));
        } else {
            nested[k].push_back(pv);
        }
    }
    for (auto& [k, group] : nested) o.set(k, decode_range(group, depth + 1));
    return o;
}

} // namespace

ObjectTree od_decode(const ObjectDescription& d) {
    ProperReport report = is_proper(d);
    if (!report.proper) throw ImproperDescription(describe(report.violations.front()));
    std::vector<const PathValue*> pairs;
    for (const auto& pv : d) pairs.push_back(&pv);
    return decode_range(pairs, 0);
}

std::set<Path> paths_of(const Instance& i) {
    std::set<Path> out;
    for (const auto& [name, od] : i.relations())
        for (const auto& pv : od) out.insert(pv.path);
    return out;
}

namespace {

class Permuter {
public:
    explicit Permuter(const std::map<std::string, std::string>& f) : f_(f) {}

    Key key(Key k) {
        if (k.is_atomic()) {
            auto it = f_.find(k.symbol());
            return it == f_.end() ? k : Key::atom(it->second);
        }
        return Key::packed(path(k.inner()));
    }

    Path path(std::span<const Key> p) {
        Path out;
        out.reserve(p.size());
        for (Key k : p) out.push_back(key(k));
        return out;
    }

    AtomicValue value(const AtomicValue& v) {
        return v.is_empty_object() ? v : AtomicValue::of(key(v.key()));
    }

private:
    const std::map<std::string, std::string>& f_;
};

void check_injective(const std::map<std::string, std::string>& f, const std::set<std::string>& support) {
    std::map<std::string, std::string> image_of;
    for (const auto& s : support) {
        auto it = f.find(s);
        const std::string& t = it == f.end() ? s : it->second;
        auto [pos, fresh] = image_of.emplace(t, s);
        if (!fresh) throw NotInjectiveOnSupport("symbols '" + pos->second + "' and '" + s + "' both map to '" + t + "'");
    }
}

} // namespace

Instance apply_permutation(const std::map<std::string, std::string>& f, const Instance& i) {
    check_injective(f, atoms_of(i));
    Permuter perm(f);
    Instance out;
    for (const auto& [name, od] : i.relations()) {
        out.declare(name);
        for (const auto& pv : od) out.add(name, perm.path(pv.path), perm.value(pv.value));
    }
    return out;
}

Path apply_permutation(const std::map<std::string, std::string>& f, std::span<const Key> path) {
    Permuter perm(f);
    return perm.path(path);
}

bool is_flat(const ObjectDescription& d) {
    return std::all_of(d.begin(), d.end(), [](const PathValue& pv) { return is_flat(pv.path); });
}

bool is_flat(const Instance& i) {
    return std::all_of(i.relations().begin(), i.relations().end(),
                       [](const auto& e) { return is_flat(e.second); });
}

std::set<std::string> atoms_of(const Instance& i) {
    std::set<std::string> out;
    for (const auto& [name, od] : i.relations()) {
        for (const auto& pv : od) {
            for_each_atom(pv.path, [&](Key k) { out.insert(k.symbol()); });
            if (!pv.value.is_empty_object()) out.insert(pv.value.key().symbol());
        }
    }
    return out;
}

} // namespace jlogic
