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

#include <string>
#include <string_view>

#include "jlogic/object.hpp"

namespace jlogic {

enum class OutputMode {
    Pairs,      ///< every relation as an explicit pair list
    Tree,       ///< proper, flat relations as JSON objects; others fall back to pairs
    Freshened,  ///< packed keys replaced by fresh identifiers, then as Tree
};

/// Reads an instance file: a JSON object mapping relation names to either a
/// JSON object (converted with od_encode) or a pair list
/// [{"path": [key, ...], "value": string | null}], where a key is a string
/// or {"packed": [key, ...]}. Numbers are kept as their source text.
/// Throws FormatError.
Instance read_instance(std::string_view json_text);

/// Canonical, byte-stable rendering of an instance.
std::string write_instance(const Instance& i, OutputMode mode, const std::string& fresh_prefix = "k");

/// Replaces every packed key by a fresh atomic identifier prefix1, prefix2, ...
/// in canonical first-occurrence order. Identifiers already used as atomic
/// symbols in i are skipped.
Instance freshen_packed_keys(const Instance& i, const std::string& prefix = "k");

} // namespace jlogic
