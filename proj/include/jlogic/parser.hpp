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

#include <string_view>
#include <vector>

#include "jlogic/ast.hpp"

namespace jlogic {

/// Parses a program. Comments start with '%' at the beginning of a line or
/// when followed by whitespace. Throws SyntaxError.
Program parse_program(std::string_view text);

/// Parses exactly one rule (the trailing '.' is optional).
Rule parse_rule(std::string_view text);

/// Parses a path expression such as a.$x.<@y>.
PathExpr parse_path_expr(std::string_view text);

/// Parses dependencies of the form `body -> @i = @j.` or `body -> false.`
std::vector<Jaegd> parse_jaegds(std::string_view text);
Jaegd parse_jaegd(std::string_view text);

} // namespace jlogic
