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
#include <string>

#include "jlogic/ast.hpp"
#include "jlogic/object.hpp"

namespace jlogic {

/// Rewrites p so that every IDB relation holds a proper description on
/// proper inputs: P(e:t) becomes P'(<e>.<t>:{}) (or <e>.<b.b> for t = {}),
/// with encoding rules for inputs and decoding rules for outputs. The
/// reserved symbol is chosen outside the program's constants.
Program properize_intermediates(const Program& p);

/// Reserved symbols of the packing-free simulation. `open`/`close` bracket
/// packed keys (<e> becomes open.close.e'.close.open); `cursor` and `mark`
/// build the cursors of the encoding and decoding passes. Any choice with
/// open != close and cursor != mark works.
struct DepackSymbols {
    std::string open = "a";
    std::string close = "b";
    std::string cursor = "c";
    std::string mark = "d";
};

/// The doubled encoding of a path: every atomic key k becomes k.k and every
/// packed key <q> becomes open.close.q'.close.open.
Path encode_path(std::span<const Key> p, const DepackSymbols& s = {});

/// Translation of one desugared, equality-free rule: constants and atomic
/// variables in paths are doubled, packed expressions are bracketed and each
/// path variable gets a validity check Enc_B($x:{}) over a body relation B
/// that binds it. Relations are renamed through `rename` (identity when
/// absent).
Rule depack_rule(const Rule& r, const DepackSymbols& s = {}, const std::map<std::string, std::string>& rename = {});

/// Name of the validity relation for (renamed) relation b.
std::string validity_relation(const std::string& b);

/// A program without packing equivalent to p over flat instances, when p
/// computes a flat-flat query. The result is recursive.
Program eliminate_packing(const Program& p, const DepackSymbols& s = {});

} // namespace jlogic
