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

#include <vector>

#include "jlogic/ast.hpp"

namespace jlogic {

/// True if a %, ? or # variable (or an empty-object equality side) occurs.
bool has_sugar(const Rule& r);
bool has_sugar(const Program& p);

/// Expands sugar variables into core rules. Each sugar variable splits a
/// rule in two (% into @ and {}, ? into $ and nothing, # into @ and <$>);
/// equalities are resolved afterwards and copies that can never fire are
/// dropped. Throws IllegalSugar.
std::vector<Rule> desugar(const Rule& r);
Program desugar(const Program& p);

} // namespace jlogic
