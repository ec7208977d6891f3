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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jlogic/ast.hpp"
#include "jlogic/object.hpp"

namespace jlogic {

/// All variable mappings h defined on vars(b1) with h(b1) a subset of b2.
/// Bodies must be equality-free.
std::vector<Substitution> find_homomorphisms(const std::vector<Predicate>& b1, const std::vector<Predicate>& b2);

/// As find_homomorphisms, but atomic variables may also map to path variables.
std::vector<Substitution> find_weak_morphisms(const std::vector<Predicate>& b1, const std::vector<Predicate>& b2);

/// True if some atomic variable is mapped to a path variable.
bool is_strictly_weak(const Substitution& h);

struct ChaseOutcome {
    bool failed = false;
    /// The final jaegd when the chase succeeded.
    Jaegd result;
    bool trivial_consequent = false;
    std::size_t steps = 0;
};

struct ChaseOptions {
    /// When set, each step picks a random applicable (dependency, homomorphism)
    /// pair instead of the least one.
    std::optional<std::uint64_t> shuffle_seed;
};

ChaseOutcome chase(const Jaegd& sigma, const std::vector<Jaegd>& Sigma, const ChaseOptions& options = {});

struct AmbiguityReport {
    bool unambiguous = true;
    /// On false: a weak morphism that is not a variable mapping, and the
    /// index of the dependency it starts from.
    Substitution witness;
    std::size_t dependency = 0;
};

/// Checks the weak morphisms from the bodies of Sigma into the chased body.
AmbiguityReport is_unambiguous(const ChaseOutcome& outcome, const std::vector<Jaegd>& Sigma);

enum class VerdictKind { Implied, NotImpliedByChase, Ambiguous };

const char* to_string(VerdictKind k);

struct ImplicationVerdict {
    VerdictKind kind = VerdictKind::Implied;
    ChaseOutcome outcome;
    /// Set for Ambiguous.
    AmbiguityReport ambiguity;
};

ImplicationVerdict decide_implication(const Jaegd& sigma, const std::vector<Jaegd>& Sigma);

/// The six properness dependencies over the given relation name.
std::vector<Jaegd> delta_for(const std::string& relation);

/// I satisfies j: every matching of the body agrees on the consequent.
bool satisfies(const Instance& i, const Jaegd& j);
bool satisfies(const Instance& i, const std::vector<Jaegd>& js);

std::string to_string(const Substitution& h);

} // namespace jlogic
