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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jlogic/ast.hpp"
#include "jlogic/chase.hpp"
#include "jlogic/errors.hpp"
#include "jlogic/object.hpp"

namespace jlogic {

/// Raised when an analysis precondition does not hold.
class Unsupported : public Error {
public:
    using Error::Error;
};

/// Inlines the IDB predicates of a positive nonrecursive program so that
/// the rules for `outputs` mention only non-IDB relations. Sugar and
/// equalities are removed along the way. Throws Unsupported.
std::vector<Rule> unfold(const Program& p, const std::set<std::string>& outputs);

struct ObjectObjectVerdict {
    enum class Kind { Yes, No, Unsupported };
    Kind kind = Kind::Yes;
    std::string reason;
    /// For No: the properness dependency (1..6) violated on relation
    /// `relation`, the rule pair after unfolding, and the dependency the
    /// input properness does not imply.
    std::size_t delta = 0;
    std::string relation;
    std::optional<Rule> rule1, rule2;
    std::optional<Jaegd> dependency;
    /// For No: a proper input instance (the frozen chased body) and whether
    /// evaluating the program on it produced an improper output.
    std::optional<Instance> counterexample;
    bool verified = false;
    std::size_t checked = 0;
};

const char* to_string(ObjectObjectVerdict::Kind k);

/// Decides whether the query maps proper inputs to proper outputs.
/// Vocabularies default to those of the program.
ObjectObjectVerdict decide_object_object(const Program& p, std::optional<std::set<std::string>> vocab_in = {},
                                         std::optional<std::set<std::string>> vocab_out = {});

struct Variant {
    Rule rule;
    std::map<Variable, std::size_t> lengths;
};

/// Replaces each path variable $x by @x^1 ... @x^n for the chosen n.
Variant make_variant(const Rule& r, const std::map<Variable, std::size_t>& lengths);

/// All variants with chosen lengths in 1..max_len. Precondition: r is
/// equality-free with a flat body.
std::vector<Variant> enumerate_variants(const Rule& r, std::size_t max_len);

struct ContainmentVerdict {
    enum class Kind { Contained, NotContained, PreconditionFailed };
    Kind kind = Kind::Contained;
    std::string reason;
    /// For NotContained: the uncovered variant, a counterexample instance
    /// built from its body, the output fact only the left side produces, and
    /// whether evaluating both sides confirmed it.
    std::optional<Variant> witness;
    std::optional<Instance> counterexample;
    std::optional<Fact> missing;
    bool verified = false;
    std::size_t variants_checked = 0;
};

const char* to_string(ContainmentVerdict::Kind k);

struct ContainmentOptions {
    /// Overrides the m+1 bound on chosen lengths.
    std::optional<std::size_t> max_length;
    /// Shrink the chosen lengths of a witness greedily.
    bool minimize = true;
};

/// Containment over flat instances of a rule (or every output rule of p1)
/// in the positive nonrecursive program p2.
ContainmentVerdict decide_containment_flat(const Rule& r1, const Program& p2, const ContainmentOptions& o = {});
ContainmentVerdict decide_containment_flat(const Program& p1, const Program& p2, const ContainmentOptions& o = {});

/// Containment over proper flat instances: the left rule is chased with the
/// properness dependencies of its input relations first.
ContainmentVerdict decide_containment_proper_flat(const Rule& r1, const Program& p2, const ContainmentOptions& o = {});
ContainmentVerdict decide_containment_proper_flat(const Program& p1, const Program& p2, const ContainmentOptions& o = {});

/// Chases a positive rule body with sigma; substitutions reach the head.
/// Returns nullopt when the chase fails.
std::optional<Rule> chase_rule(const Rule& r, const std::vector<Jaegd>& sigma);

} // namespace jlogic
