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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "jlogic/analysis.hpp"
#include "jlogic/chase.hpp"
#include "jlogic/checks.hpp"
#include "jlogic/desugar.hpp"
#include "jlogic/errors.hpp"
#include "jlogic/eval.hpp"
#include "jlogic/json_io.hpp"
#include "jlogic/parser.hpp"
#include "jlogic/transform.hpp"
#include "jlogic/unify.hpp"

using namespace jlogic;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "jlogic-verdict/1";

enum Exit { kOk = 0, kNegative = 1, kStatic = 2, kLimit = 3, kUsage = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string limits;
    std::string output_mode = "pairs";
    std::string fresh_prefix = "k";
    std::string format = "json";
    std::optional<std::uint64_t> seed;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

OutputMode output_mode(const Config& c) {
    if (c.output_mode == "tree") return OutputMode::Tree;
    if (c.output_mode == "freshened") return OutputMode::Freshened;
    return OutputMode::Pairs;
}

Json instance_json(const Instance& i) { return Json::parse(write_instance(i, OutputMode::Pairs)); }

Json verdict(const std::string& command, const std::string& v) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    j["verdict"] = v;
    return j;
}

void emit(const Config& c, const Json& j) {
    if (c.format == "text") {
        std::cout << j.value("verdict", "") ;
        if (j.contains("reason") && !j["reason"].get<std::string>().empty()) std::cout << ": " << j["reason"].get<std::string>();
        std::cout << "\n";
        return;
    }
    std::cout << j.dump(2) << "\n";
}

std::string pv_string(const PathValue& pv) { return to_string(pv.path) + ":" + to_string(pv.value); }

// ---------------------------------------------------------------------------

int cmd_eval(const Config& c, const std::string& program, const std::string& instance, bool freshen, bool naive) {
    Program p = parse_program(read_file(program));
    Instance i = read_instance(read_file(instance));
    EvalOptions o;
    if (!c.limits.empty()) o.limits = EvalLimits::parse(c.limits);
    o.naive = naive;
    Instance out = eval_query(p, i, o);
    std::cout << write_instance(out, freshen ? OutputMode::Freshened : output_mode(c), c.fresh_prefix) << "\n";
    return kOk;
}

int cmd_check(const Config& c, const std::string& program) {
    Program p = parse_program(read_file(program));
    Json j = verdict("check", "ok");
    Program d;
    try {
        d = desugar(p);
    } catch (const IllegalSugar& e) {
        j["verdict"] = "error";
        j["reason"] = e.what();
        emit(c, j);
        return kStatic;
    }
    auto diag = diagnose(d);
    Json unsafe = Json::array();
    for (const auto& [index, report] : diag.unsafe_rules) {
        Json vars = Json::array();
        for (const auto& v : report.unlimited) vars.push_back(to_string(v));
        unsafe.push_back({{"rule", to_string(d.rules[index])}, {"unlimited", vars}});
    }
    Json cyclic = Json::array();
    for (auto index : diag.cyclic_rules) cyclic.push_back(to_string(d.rules[index]));
    j["safe"] = diag.unsafe_rules.empty();
    j["unsafe_rules"] = unsafe;
    j["stratifiable"] = diag.stratifiable;
    if (!diag.stratifiable) j["stratification_error"] = diag.stratification_error;
    j["strata"] = diag.strata;
    j["recursive"] = diag.recursive;
    j["positive"] = is_positive(d);
    j["equationally_acyclic"] = cyclic.empty();
    j["cyclic_rules"] = cyclic;
    j["vocab_in"] = p.vocab_in();
    j["vocab_out"] = p.vocab_out();
    if (!diag.vocab_error.empty()) j["vocab_error"] = diag.vocab_error;
    if (!diag.ok()) {
        j["verdict"] = "error";
        j["reason"] = !diag.unsafe_rules.empty() ? "unsafe rule" : !diag.stratifiable ? diag.stratification_error : diag.vocab_error;
    }
    emit(c, j);
    return diag.ok() ? kOk : kStatic;
}

int cmd_check_proper(const Config& c, const std::string& instance, bool all) {
    Instance i = read_instance(read_file(instance));
    bool proper = true;
    Json rels = Json::object();
    for (const auto& [name, d] : i.relations()) {
        auto report = is_proper(d, all);
        proper = proper && report.proper;
        Json vs = Json::array();
        for (const auto& v : report.violations)
            vs.push_back({{"kind", v.kind == ViolationKind::FunctionalDependency ? "fd" : "prefix"},
                          {"first", pv_string(v.first)},
                          {"second", pv_string(v.second)}});
        rels[name] = {{"proper", report.proper}, {"violations", vs}};
    }
    Json j = verdict("check-proper", proper ? "proper" : "improper");
    j["relations"] = rels;
    emit(c, j);
    return proper ? kOk : kNegative;
}

int cmd_check_oo(const Config& c, const std::string& program) {
    Program p = parse_program(read_file(program));
    auto v = decide_object_object(p);
    Json j = verdict("check-oo", to_string(v.kind));
    j["reason"] = v.reason;
    j["checked"] = v.checked;
    if (v.kind == ObjectObjectVerdict::Kind::No) {
        j["delta"] = v.delta;
        j["relation"] = v.relation;
        j["rule1"] = to_string(*v.rule1);
        j["rule2"] = to_string(*v.rule2);
        j["dependency"] = to_string(*v.dependency);
        j["counterexample"] = instance_json(*v.counterexample);
        j["verified"] = v.verified;
    }
    emit(c, j);
    switch (v.kind) {
    case ObjectObjectVerdict::Kind::Yes: return kOk;
    case ObjectObjectVerdict::Kind::No: return kNegative;
    default: return kStatic;
    }
}

int cmd_check_containment(const Config& c, const std::string& left, const std::string& right, bool proper,
                          std::optional<std::size_t> max_length) {
    Program p1 = parse_program(read_file(left));
    Program p2 = parse_program(read_file(right));
    ContainmentOptions o;
    o.max_length = max_length;
    auto v = proper ? decide_containment_proper_flat(p1, p2, o) : decide_containment_flat(p1, p2, o);
    Json j = verdict("check-containment", to_string(v.kind));
    j["scope"] = proper ? "proper-flat" : "flat";
    j["reason"] = v.reason;
    j["variants_checked"] = v.variants_checked;
    if (v.kind == ContainmentVerdict::Kind::NotContained) {
        Json lengths = Json::object();
        for (const auto& [var, n] : v.witness->lengths) lengths[to_string(var)] = n;
        j["witness"] = {{"variant", to_string(v.witness->rule)}, {"lengths", lengths}};
        j["counterexample"] = instance_json(*v.counterexample);
        j["missing"] = to_string(*v.missing);
        j["verified"] = v.verified;
    }
    emit(c, j);
    switch (v.kind) {
    case ContainmentVerdict::Kind::Contained: return kOk;
    case ContainmentVerdict::Kind::NotContained: return kNegative;
    default: return kStatic;
    }
}

int cmd_chase(const Config& c, const std::string& sigma_file, const std::vector<std::string>& Sigma_files,
              const std::vector<std::string>& delta) {
    auto sigmas = parse_jaegds(read_file(sigma_file));
    if (sigmas.size() != 1) throw UsageError("--sigma must hold exactly one dependency");
    Jaegd sigma = sigmas[0];
    std::vector<Jaegd> Sigma;
    for (const auto& f : Sigma_files)
        for (auto& d : parse_jaegds(read_file(f))) Sigma.push_back(std::move(d));
    for (const auto& r : delta)
        for (auto& d : delta_for(r)) Sigma.push_back(std::move(d));
    auto flatten = [](const Jaegd& j) {
        auto js = eliminate_equalities(j);
        return js;
    };
    if (!sigma.equalities.empty()) {
        auto js = flatten(sigma);
        if (js.size() != 1) throw StaticError("--sigma: equality elimination yields " + std::to_string(js.size()) + " dependencies");
        sigma = js[0];
    }
    std::vector<Jaegd> flat;
    for (const auto& d : Sigma)
        for (auto& x : flatten(d)) flat.push_back(std::move(x));

    ImplicationVerdict v;
    if (c.seed) {
        v.outcome = chase(sigma, flat, ChaseOptions{c.seed});
        if (v.outcome.failed || v.outcome.trivial_consequent) v.kind = VerdictKind::Implied;
        else {
            v.ambiguity = is_unambiguous(v.outcome, flat);
            v.kind = v.ambiguity.unambiguous ? VerdictKind::NotImpliedByChase : VerdictKind::Ambiguous;
        }
    } else {
        v = decide_implication(sigma, flat);
    }
    Json j = verdict("chase", to_string(v.kind));
    j["outcome"] = v.outcome.failed ? "failed" : "succeeded";
    j["steps"] = v.outcome.steps;
    if (!v.outcome.failed) {
        j["result"] = to_string(v.outcome.result);
        j["trivial_consequent"] = v.outcome.trivial_consequent;
    }
    if (v.kind == VerdictKind::Ambiguous) {
        j["witness"] = to_string(v.ambiguity.witness);
        j["witness_dependency"] = to_string(flat[v.ambiguity.dependency]);
    }
    emit(c, j);
    return v.kind == VerdictKind::Implied ? kOk : kNegative;
}

int cmd_print(const std::string& program, const std::string& what, const std::string& mode) {
    Program p = parse_program(read_file(program));
    Program out;
    if (what == "desugar") out = desugar(p);
    else if (what == "eliminate-equalities") out = eliminate_equalities(desugar(p));
    else if (mode == "properize") out = properize_intermediates(p);
    else out = eliminate_packing(p);
    std::cout << to_string(out);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"jlogic: evaluate and analyze J-Logic programs"};
    app.require_subcommand(1);
    app.fallthrough();
    Config c;
    std::uint64_t seed = 0;
    app.add_option("--limits", c.limits, "evaluation limits, e.g. facts=1000000,path=10000,depth=64");
    app.add_option("--output-mode", c.output_mode, "instance rendering")->check(CLI::IsMember({"pairs", "tree", "freshened"}));
    app.add_option("--fresh-prefix", c.fresh_prefix, "prefix for fresh identifiers");
    app.add_option("--format", c.format, "verdict format")->check(CLI::IsMember({"json", "text"}));
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized choices");

    std::string program, instance, left, right, sigma, mode;
    std::vector<std::string> Sigma, delta;
    bool freshen = false, naive = false, all = false, proper = false;
    std::size_t max_length = 0;

    auto* eval = app.add_subcommand("eval", "evaluate a program on an instance");
    eval->add_option("--program", program)->required();
    eval->add_option("--instance", instance)->required();
    eval->add_flag("--freshen", freshen, "replace packed keys by fresh identifiers");
    eval->add_flag("--naive", naive, "plain fixpoint iteration");

    auto* check = app.add_subcommand("check", "static checks of a program");
    check->add_option("--program", program)->required();

    auto* check_proper = app.add_subcommand("check-proper", "properness of every relation of an instance");
    check_proper->add_option("--instance", instance)->required();
    check_proper->add_flag("--all", all, "report every violation");

    auto* check_oo = app.add_subcommand("check-oo", "does the program map proper inputs to proper outputs");
    check_oo->add_option("--program", program)->required();

    auto* check_cont = app.add_subcommand("check-containment", "containment over flat instances");
    check_cont->add_option("--left", left)->required();
    check_cont->add_option("--right", right)->required();
    check_cont->add_flag("--proper", proper, "restrict to proper flat instances");
    auto* max_len_opt = check_cont->add_option("--max-length", max_length, "override the chosen-length bound");

    auto* chase_cmd = app.add_subcommand("chase", "chase a dependency");
    chase_cmd->add_option("--sigma", sigma, "file with the dependency to test")->required();
    chase_cmd->add_option("--Sigma", Sigma, "file(s) with the premise dependencies");
    chase_cmd->add_option("--delta", delta, "add the properness dependencies of a relation");

    auto* elim = app.add_subcommand("eliminate-equalities", "remove positive equalities");
    elim->add_option("--program", program)->required();

    auto* transform = app.add_subcommand("transform", "program transformations");
    transform->add_option("--mode", mode)->required()->check(CLI::IsMember({"properize", "depack"}));
    transform->add_option("--program", program)->required();

    auto* ds = app.add_subcommand("desugar", "expand syntactic sugar");
    ds->add_option("--program", program)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (seed_opt->count()) c.seed = seed;

    try {
        if (*eval) return cmd_eval(c, program, instance, freshen, naive);
        if (*check) return cmd_check(c, program);
        if (*check_proper) return cmd_check_proper(c, instance, all);
        if (*check_oo) return cmd_check_oo(c, program);
        if (*check_cont)
            return cmd_check_containment(c, left, right, proper, max_len_opt->count() ? std::optional<std::size_t>(max_length) : std::nullopt);
        if (*chase_cmd) return cmd_chase(c, sigma, Sigma, delta);
        if (*elim) return cmd_print(program, "eliminate-equalities", "");
        if (*transform) return cmd_print(program, "transform", mode);
        if (*ds) return cmd_print(program, "desugar", "");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const LimitExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kLimit;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStatic;
    }
    return kUsage;
}
