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
#include <set>
#include <string>
#include <vector>

#include "jlogic/ast.hpp"

namespace jlogic {

struct SafetyReport {
    bool safe = true;
    std::set<Variable> unlimited;
};

/// Limited variables: those in positive predicates, closed under positive
/// equalities whose other side is fully limited. Expects a desugared rule.
std::set<Variable> limited_variables(const Rule& r);
SafetyReport check_safety(const Rule& r);

/// Rule indices grouped by stratum, lowest first. Each IDB relation sits in
/// the least stratum consistent with its dependencies. Throws NotStratifiable.
struct Strata {
    std::vector<std::vector<std::size_t>> rules;
    std::map<std::string, std::size_t> level;
};
Strata stratify(const Program& p);

/// A cycle among IDB dependencies, self-loops included.
bool is_recursive(const Program& p);
bool is_positive(const Program& p);
bool is_positive(const Rule& r);

/// Undirected multigraph over the variables of a rule's positive
/// equalities. For an equality e1 = e2 the multiplicity between distinct x
/// and y is #x(e1)*#y(e2) + #y(e1)*#x(e2); a loop at x has #x(e1)*#x(e2).
struct EquationGraph {
    std::set<Variable> nodes;
    std::map<std::pair<Variable, Variable>, std::size_t> edges;  // key has first <= second

    std::size_t multiplicity(const Variable& x, const Variable& y) const;
    bool is_cyclic() const;
};

EquationGraph equation_graph(const std::vector<Equality>& equalities);
EquationGraph equation_graph(const Rule& r);
bool is_equationally_acyclic(const Rule& r);
bool is_equationally_acyclic(const Program& p);

/// Positive equalities of a rule body, deduplicated, in order.
std::vector<Equality> positive_equalities(const Rule& r);

/// Full static check of a desugared program: safety, stratification and
/// vocabularies. Throws StaticError (or a subclass) on the first problem.
void check_program(const Program& p);

/// Diagnostics for the `check` command.
struct ProgramDiagnostics {
    std::vector<std::pair<std::size_t, SafetyReport>> unsafe_rules;
    bool stratifiable = true;
    std::string stratification_error;
    std::size_t strata = 0;
    bool recursive = false;
    std::vector<std::size_t> cyclic_rules;
    std::string vocab_error;

    bool ok() const { return unsafe_rules.empty() && stratifiable && vocab_error.empty(); }
};
ProgramDiagnostics diagnose(const Program& desugared);

} // namespace jlogic
