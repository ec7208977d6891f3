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

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "jlogic/ast.hpp"
#include "jlogic/object.hpp"

namespace jlogic {

/// Atomic variables map to length-one paths holding an atomic key; path
/// variables map to nonempty paths.
using Valuation = std::map<Variable, Path>;

std::string to_string(const Valuation& v);

struct EvalLimits {
    std::size_t max_derived_facts = 1000000;
    std::size_t max_path_length = 10000;
    std::size_t max_pack_depth = 64;

    /// Parses "facts=N,path=N,depth=N" (any subset, any order).
    static EvalLimits parse(const std::string& spec);
};

struct EvalOptions {
    EvalLimits limits;
    /// Plain fixpoint iteration instead of the semi-naive one.
    bool naive = false;
};

/// All extensions of `partial` mapping pred onto the fact.
std::vector<Valuation> match_predicate(const Predicate& pred, const Fact& fact, const Valuation& partial = {});

/// Immediate consequences of one rule on i (no fixpoint). Sugar is expanded first.
std::set<Fact> eval_rule(const Rule& r, const Instance& i, const EvalLimits& limits = {});

/// Least fixpoint of a semipositive set of desugared rules, returned as i
/// extended with the derived facts.
Instance eval_semipositive(const std::vector<Rule>& stratum, const Instance& i, const EvalOptions& options = {});

/// Stratified evaluation. Sugar is expanded and the program statically
/// checked first. Throws StaticError, VocabMismatch, LimitExceeded.
Instance eval_program(const Program& p, const Instance& i, const EvalOptions& options = {});

/// eval_program restricted to the output vocabulary.
Instance eval_query(const Program& p, const Instance& i, const EvalOptions& options = {});

/// Valuation search used by the homomorphism machinery: enumerates the
/// valuations of the variables of `body` (positive predicates and positive
/// equalities, applied in a safe order) that satisfy it on db. `atomic_ok`,
/// when set, restricts the keys atomic variables may take. The callback
/// returns false to stop.
struct SearchOptions {
    std::function<bool(Key)> atomic_ok;
};
void for_each_valuation(const std::vector<Literal>& body, const Instance& db, const SearchOptions& options,
                        const std::function<bool(const Valuation&)>& callback);

} // namespace jlogic
