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

#include <set>
#include <string>
#include <vector>

#include "jlogic/ast.hpp"

namespace jlogic {

/// A most general unifier: mapping(e1) = mapping(e2) = unified. Images use
/// fresh variables only, named canonically (_1, _2, ... by first occurrence
/// in the unified expression).
struct Unifier {
    Substitution mapping;
    PathExpr unified;

    friend bool operator==(const Unifier&, const Unifier&) = default;
};

std::string to_string(const Unifier& u);

/// One representative per class of most general unifiers of e1 = e2.
/// Supported: equations where every variable occurs at most once in total,
/// and equations with a variable-free side (solved by matching). Anything
/// else throws CyclicEquality. Fresh names avoid the names in `avoid`.
std::vector<Unifier> enumerate_mgus(const PathExpr& e1, const PathExpr& e2, const std::set<Variable>& avoid = {});

/// Equality-free equivalents. Throws CyclicEquality for equationally cyclic
/// input or when an intermediate equality cannot be solved. With
/// `require_acyclic` false the graph test is skipped and only solvability
/// (linear or one-sided ground equations) matters.
std::vector<Rule> eliminate_equalities(const Rule& r, bool require_acyclic = true);
std::vector<Jaegd> eliminate_equalities(const Jaegd& j, bool require_acyclic = true);
Program eliminate_equalities(const Program& p);

} // namespace jlogic
