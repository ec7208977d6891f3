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

#include "jlogic/json_io.hpp"

#include <map>
#include <vector>

#include <json.hpp>

#include "jlogic/errors.hpp"

namespace jlogic {

namespace {

using nlohmann::json;

// Builds a DOM in which every number is replaced by its source text, so
// 12 and "12" denote the same atomic key and 1.50 stays "1.50".
class TextNumberSax : public nlohmann::json_sax<json> {
public:
    bool null() override { return put(json(nullptr)); }
    bool boolean(bool v) override { return put(json(v)); }
    bool number_integer(number_integer_t v) override { return put(json(std::to_string(v))); }
    bool number_unsigned(number_unsigned_t v) override { return put(json(std::to_string(v))); }
    bool number_float(number_float_t, const string_t& s) override { return put(json(s)); }
    bool string(string_t& v) override { return put(json(v)); }
    bool binary(binary_t&) override { return put(json(nullptr)); }

    bool start_object(std::size_t) override {
        stack_.push_back(put_ref(json::object()));
        return true;
    }
    bool key(string_t& k) override {
        pending_key_ = k;
        return true;
    }
    bool end_object() override {
        stack_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override {
        stack_.push_back(put_ref(json::array()));
        return true;
    }
    bool end_array() override {
        stack_.pop_back();
        return true;
    }
    bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
        throw FormatError("invalid JSON at byte " + std::to_string(position) + ": " + ex.what());
    }

    json result;

private:
    bool put(json v) {
        put_ref(std::move(v));
        return true;
    }

    json* put_ref(json v) {
        if (stack_.empty()) {
            result = std::move(v);
            return &result;
        }
        json& top = *stack_.back();
        if (top.is_array()) {
            top.push_back(std::move(v));
            return &top.back();
        }
        if (top.contains(pending_key_)) throw FormatError("duplicate JSON key '" + pending_key_ + "'");
        return &(top[pending_key_] = std::move(v));
    }

    std::vector<json*> stack_;
    std::string pending_key_;
};

std::string scalar_symbol(const json& v, const std::string& where) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.empty()) throw FormatError(where + ": atomic keys are nonempty strings");
        return s;
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    throw FormatError(where + ": expected an atomic key");
}

ObjectTree tree_from_json(const json& j, const std::string& where) {
    ObjectTree o;
    for (const auto& [k, v] : j.items()) {
        std::string here = where + "." + k;
        if (k.empty()) throw FormatError(here + ": empty key");
        if (v.is_object()) o.set(k, tree_from_json(v, here));
        else if (v.is_array()) throw FormatError(here + ": JSON arrays are not supported");
        else if (v.is_null()) throw FormatError(here + ": null is not a value in tree mode (use {} for the empty object)");
        else o.set(k, ObjectTree::leaf(scalar_symbol(v, here)));
    }
    return o;
}

Key key_from_json(const json& j, const std::string& where) {
    if (j.is_object()) {
        if (j.size() != 1 || !j.contains("packed")) throw FormatError(where + ": a structured key must be {\"packed\": [...]}");
        const json& inner = j["packed"];
        if (!inner.is_array() || inner.empty()) throw FormatError(where + ": packed key needs a nonempty key list");
        Path p;
        for (const auto& k : inner) p.push_back(key_from_json(k, where));
        return Key::packed(p);
    }
    return Key::atom(scalar_symbol(j, where));
}

void read_pairs(const json& list, const std::string& relation, Instance& out) {
    std::size_t index = 0;
    for (const auto& item : list) {
        std::string where = relation + "[" + std::to_string(index++) + "]";
        if (!item.is_object() || !item.contains("path") || !item.contains("value"))
            throw FormatError(where + ": expected {\"path\": [...], \"value\": ...}");
        const json& path = item["path"];
        if (!path.is_array() || path.empty()) throw FormatError(where + ": path must be a nonempty list");
        Path p;
        for (const auto& k : path) p.push_back(key_from_json(k, where));
        const json& value = item["value"];
        AtomicValue v = value.is_null() ? AtomicValue::empty_object() : AtomicValue::atom(scalar_symbol(value, where));
        out.add(relation, std::move(p), v);
    }
}

json key_to_json(Key k) {
    if (k.is_atomic()) return json(k.symbol());
    json inner = json::array();
    for (Key x : k.inner()) inner.push_back(key_to_json(x));
    return json{{"packed", inner}};
}

std::string quote(const std::string& s) { return json(s).dump(); }

void write_pairs(std::string& out, const ObjectDescription& od) {
    auto pairs = canonical_pairs(od);
    if (pairs.empty()) {
        out += "[]";
        return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        json path = json::array();
        for (Key k : pairs[i].path) path.push_back(key_to_json(k));
        out += "    {\"path\": " + path.dump() + ", \"value\": ";
        out += pairs[i].value.is_empty_object() ? std::string("null") : quote(pairs[i].value.key().symbol());
        out += i + 1 < pairs.size() ? "},\n" : "}\n";
    }
    out += "  ]";
}

void write_tree(std::string& out, const ObjectTree& o, int indent) {
    if (o.entries().empty()) {
        out += "{}";
        return;
    }
    std::vector<std::pair<std::string, const ObjectTree*>> sorted;
    for (const auto& [k, v] : o.entries()) sorted.emplace_back(k.symbol(), &v);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    out += "{\n";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out += pad + quote(sorted[i].first) + ": ";
        const ObjectTree& v = *sorted[i].second;
        if (v.is_atomic()) out += quote(v.atom().symbol());
        else write_tree(out, v, indent + 2);
        out += i + 1 < sorted.size() ? ",\n" : "\n";
    }
    out += std::string(static_cast<std::size_t>(indent), ' ') + "}";
}

} // namespace

Instance read_instance(std::string_view json_text) {
    TextNumberSax sax;
    json::sax_parse(json_text.begin(), json_text.end(), &sax);
    const json& doc = sax.result;
    if (!doc.is_object()) throw FormatError("instance file must be a JSON object of relations");
    Instance out;
    for (const auto& [name, body] : doc.items()) {
        if (name.empty()) throw FormatError("empty relation name");
        out.declare(name);
        if (body.is_object()) {
            for (const auto& pv : od_encode(tree_from_json(body, name))) out.insert(name, pv);
        } else if (body.is_array()) {
            read_pairs(body, name, out);
        } else {
            throw FormatError(name + ": relation must be a JSON object or a pair list");
        }
    }
    return out;
}

Instance freshen_packed_keys(const Instance& i, const std::string& prefix) {
    std::set<std::string> used = atoms_of(i);
    std::map<Key, Key> renamed;
    std::size_t counter = 0;
    auto fresh = [&]() {
        std::string s;
        do s = prefix + std::to_string(++counter);
        while (used.count(s) > 0);
        used.insert(s);
        return Key::atom(s);
    };
    // Canonical traversal so that numbering is independent of interning order.
    Instance out;
    for (const auto& [name, od] : i.relations()) {
        out.declare(name);
        for (const auto& pv : canonical_pairs(od)) {
            Path p;
            for (Key k : pv.path) {
                if (k.is_atomic()) {
                    p.push_back(k);
                    continue;
                }
                auto it = renamed.find(k);
                if (it == renamed.end()) it = renamed.emplace(k, fresh()).first;
                p.push_back(it->second);
            }
            out.add(name, std::move(p), pv.value);
        }
    }
    return out;
}

std::string write_instance(const Instance& i, OutputMode mode, const std::string& fresh_prefix) {
    const Instance& src = i;
    Instance freshened;
    if (mode == OutputMode::Freshened) freshened = freshen_packed_keys(i, fresh_prefix);
    const Instance& view = mode == OutputMode::Freshened ? freshened : src;

    std::string out = "{";
    bool first = true;
    for (const auto& [name, od] : view.relations()) {
        out += first ? "\n" : ",\n";
        first = false;
        out += "  " + quote(name) + ": ";
        bool as_tree = mode != OutputMode::Pairs && is_flat(od) && is_proper(od).proper;
        if (as_tree) write_tree(out, od_decode(od), 2);
        else write_pairs(out, od);
    }
    out += first ? "}\n" : "\n}\n";
    return out;
}

} // namespace jlogic
