#include "teach/cli.hpp"

#include "teach/costs.hpp"
#include "teach/error.hpp"
#include "teach/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace teach {

ScriptDocument parse_script(const nlohmann::json& doc) {
    ScriptDocument out;
    const nlohmann::json* list = &doc;
    if (doc.is_object()) {
        if (!doc.contains("script")) throw TeachError(ErrorCode::ParseError, "script document has no 'script' key");
        list = &doc.at("script");
        if (doc.contains("learner")) out.learner = parse_learner(doc.at("learner").get<std::string>());
        if (doc.contains("protocol")) out.protocol = parse_protocol(doc.at("protocol").get<std::string>());
    }
    if (!list->is_array()) throw TeachError(ErrorCode::ParseError, "script must be a list of actions");
    for (const auto& entry : *list) {
        if (!entry.is_object() || entry.size() != 1) {
            throw TeachError(ErrorCode::ParseError, "script entry must have exactly one key: " + entry.dump());
        }
        const auto& [key, value] = *entry.items().begin();
        if (!value.is_string()) throw TeachError(ErrorCode::ParseError, "script entry value must be a string");
        if (key == "add_feature") {
            out.actions.push_back(AddFeature{value.get<std::string>()});
        } else if (key == "add_example") {
            out.actions.push_back(AddExample{value.get<std::string>()});
        } else {
            throw TeachError(ErrorCode::ParseError, "unknown script action '" + key + "'");
        }
    }
    return out;
}

namespace {

struct Common {
    std::string instance;
    std::string learner;
    std::string protocol = "open";
    std::string feature_set = "all";
    std::string format = "table";
    std::string out;
    std::uint64_t seed = 42;
    std::size_t budget = SearchBudget{}.max_states;
};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TeachError(ErrorCode::ParseError, "cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw TeachError(ErrorCode::ParseError, path + ": " + e.what());
    }
}

std::vector<LearnerKind> learners_for(const std::string& flag) {
    if (flag.empty()) return {LearnerKind::one_nn, LearnerKind::linear};
    return {parse_learner(flag)};
}

std::vector<std::size_t> select_sets(const Instance& inst, const std::string& selector) {
    std::vector<std::size_t> out;
    if (selector == "all") {
        for (std::size_t i = 0; i < inst.lattice().size(); ++i) out.push_back(i);
        return out;
    }
    std::string body = selector;
    if (!body.empty() && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
    std::vector<std::string> ids;
    std::stringstream ss(body);
    for (std::string id; std::getline(ss, id, ',');) {
        if (!id.empty()) ids.push_back(id);
    }
    out.push_back(inst.require_lattice_index(inst.feature_set(ids)));
    return out;
}

nlohmann::json feature_list(const Instance& inst, const FeatureSet& set) {
    nlohmann::json ids = nlohmann::json::array();
    for (auto f : set.indices()) ids.push_back(inst.feature_id(f));
    return ids;
}

nlohmann::json cost_json(const CostValue& c) {
    if (c.is_infinite()) return "inf";
    return c.value();
}

// Rows are feature sets, columns learners.
void print_grid(std::ostream& os, const std::string& corner, const std::vector<std::string>& columns,
                const std::vector<std::pair<std::string, std::vector<std::string>>>& rows) {
    std::size_t first = corner.size();
    for (const auto& r : rows) first = std::max(first, r.first.size());
    std::vector<std::size_t> widths;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        std::size_t w = columns[c].size();
        for (const auto& r : rows) w = std::max(w, r.second[c].size());
        widths.push_back(w);
    }
    os << std::left << std::setw(static_cast<int>(first)) << corner;
    for (std::size_t c = 0; c < columns.size(); ++c) os << "  " << std::setw(static_cast<int>(widths[c])) << columns[c];
    os << "\n";
    for (const auto& r : rows) {
        os << std::setw(static_cast<int>(first)) << r.first;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            os << "  " << std::setw(static_cast<int>(widths[c])) << r.second[c];
        }
        os << "\n";
    }
    os << std::right;
}

std::string learner_column(LearnerKind l) { return l == LearnerKind::one_nn ? "1NN" : "lin"; }

void emit(const Common& opts, std::ostream& out, const std::string& text) {
    if (opts.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opts.out);
    if (!file) throw TeachError(ErrorCode::ParseError, "cannot write '" + opts.out + "'");
    file << text;
}

std::string machine(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

int cmd_analyze(const Common& opts, std::ostream& out) {
    const Instance inst = load_instance(opts.instance);
    const auto sets = select_sets(inst, opts.feature_set);
    const auto learners = learners_for(opts.learner);
    SearchBudget budget;
    budget.max_states = opts.budget;

    nlohmann::json rows = nlohmann::json::array();
    std::vector<std::pair<std::string, std::vector<std::string>>> grid;
    for (auto s : sets) {
        const FeatureSet& set = inst.lattice()[s];
        std::vector<std::string> cells;
        for (auto learner : learners) {
            const CostVector cost = fs_cost(inst, set, learner, budget);
            cells.push_back(cost.str());
            rows.push_back({{"feature_set", feature_list(inst, set)},
                            {"learner", std::string(to_string(learner))},
                            {"representation_cost", cost.representation_cost},
                            {"concept_spec_cost", cost_json(cost.concept_spec_cost)},
                            {"invalidation_cost", cost_json(cost.invalidation_cost)}});
        }
        grid.emplace_back(inst.describe(set), std::move(cells));
    }
    if (opts.format == "machine") {
        emit(opts, out, machine({{"command", "analyze"}, {"rows", rows}}));
        return exit_code::ok;
    }
    std::vector<std::string> columns;
    for (auto l : learners) columns.push_back(learner_column(l));
    std::ostringstream text;
    text << "feature set costs (|F|, concept spec cost, invalidation cost)\n";
    print_grid(text, "F", columns, grid);
    emit(opts, out, text.str());
    return exit_code::ok;
}

int simulate_optimal(const Common& opts, const Instance& inst, std::ostream& out) {
    const Protocol protocol = parse_protocol(opts.protocol.empty() ? "open" : opts.protocol);
    const auto sets = select_sets(inst, opts.feature_set);
    const auto learners = learners_for(opts.learner);
    SearchBudget budget;
    budget.max_states = opts.budget;

    std::vector<std::vector<TeachingCost>> costs;
    for (auto learner : learners) {
        if (sets.size() == 1) {
            costs.push_back({optimal_teaching_cost(inst, learner, protocol, inst.lattice()[sets[0]], budget)});
        } else {
            costs.push_back(optimal_teaching_costs(inst, learner, protocol, budget));
        }
    }
    nlohmann::json rows = nlohmann::json::array();
    std::vector<std::pair<std::string, std::vector<std::string>>> grid;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const FeatureSet& set = inst.lattice()[sets[i]];
        std::vector<std::string> cells;
        for (std::size_t l = 0; l < learners.size(); ++l) {
            const TeachingCost& c = costs[l][sets.size() == 1 ? 0 : sets[i]];
            cells.push_back(c.str());
            rows.push_back({{"feature_set", feature_list(inst, set)},
                            {"learner", std::string(to_string(learners[l]))},
                            {"features", c.features},
                            {"labels", cost_json(c.labels)}});
        }
        grid.emplace_back(inst.describe(set), std::move(cells));
    }
    if (opts.format == "machine") {
        emit(opts, out,
             machine({{"command", "simulate"},
                      {"mode", "optimal"},
                      {"protocol", std::string(to_string(protocol))},
                      {"rows", rows}}));
        return exit_code::ok;
    }
    std::vector<std::string> columns;
    for (auto l : learners) columns.push_back(learner_column(l));
    std::ostringstream text;
    text << "optimal teaching costs (features, labels), protocol " << to_string(protocol) << "\n";
    print_grid(text, "F", columns, grid);
    emit(opts, out, text.str());
    return exit_code::ok;
}

int simulate_script(const Common& opts, const std::string& script_path, const Instance& inst, std::ostream& out,
                    std::ostream& err) {
    const ScriptDocument script = parse_script(read_json(script_path));
    const LearnerKind learner =
        !opts.learner.empty() ? parse_learner(opts.learner) : script.learner.value_or(LearnerKind::linear);
    const Protocol protocol =
        !opts.protocol.empty() ? parse_protocol(opts.protocol) : script.protocol.value_or(Protocol::open);
    const Transcript t = run_protocol(inst, learner, protocol, scripted_teacher(script.actions));

    if (opts.format == "machine") {
        nlohmann::json doc = t.to_json(inst);
        doc["command"] = "simulate";
        doc["mode"] = "replay";
        doc["learner"] = std::string(to_string(learner));
        doc["protocol"] = std::string(to_string(protocol));
        emit(opts, out, machine(doc));
    } else {
        std::ostringstream text;
        text << "replay: learner " << to_string(learner) << ", protocol " << to_string(protocol) << "\n";
        for (std::size_t i = 0; i < t.steps.size(); ++i) {
            text << std::setw(3) << i << "  " << t.steps[i].state_digest << "  ->  " << describe(t.steps[i].action)
                 << "\n";
        }
        text << "outcome: " << to_string(t.outcome) << "\n";
        text << "final F: " << inst.describe(t.final_features) << "\n";
        text << "final T: " << inst.describe(t.final_examples) << "\n";
        text << "teaching cost (features, labels): (" << t.feature_count << "," << t.label_count << ")\n";
        emit(opts, out, text.str());
    }
    switch (t.outcome) {
        case RunOutcome::illegal_action:
            err << "illegal action at step " << (t.failed_step ? *t.failed_step : 0) << ": " << t.message << "\n";
            return exit_code::illegal_script;
        case RunOutcome::step_limit:
            err << t.message << "\n";
            return exit_code::budget;
        default:
            return exit_code::ok;
    }
}

int cmd_simulate(const Common& opts, const std::string& script, bool optimal, std::ostream& out,
                 std::ostream& err) {
    if (optimal == !script.empty()) {
        err << "simulate needs exactly one of --script or --optimal\n";
        return exit_code::usage;
    }
    const Instance inst = load_instance(opts.instance);
    if (optimal) return simulate_optimal(opts, inst, out);
    return simulate_script(opts, script, inst, out, err);
}

int cmd_verify(const Common& opts, const std::vector<std::string>& properties, std::size_t trials,
               const std::vector<std::string>& instances, std::ostream& out) {
    VerifyOptions v;
    if (!properties.empty() && !(properties.size() == 1 && properties[0] == "all")) {
        v.properties.clear();
        for (const auto& p : properties) v.properties.push_back(parse_property(p));
    }
    v.seed = opts.seed;
    v.trials = trials;
    v.budget.max_states = opts.budget;
    for (const auto& path : instances) v.extra_instances.push_back(load_instance(path));

    const VerificationResult result = run_verification(v);
    if (opts.format == "machine") {
        emit(opts, out, machine(result.to_json(v)));
    } else {
        std::ostringstream text;
        text << "seed " << v.seed << ", trials " << v.trials << "\n";
        for (const auto& r : result.reports) {
            text << to_string(r.property) << "  " << (r.passed() ? "pass" : "FAIL") << "  instances "
                 << r.instances_tried << "  checks " << r.checks << "  violations " << r.violations.size();
            if (r.incomplete) text << "  incomplete: " << r.incomplete_reason;
            text << "\n";
            for (const auto& w : r.violations) {
                text << "    instance " << w.instance << " " << w.feature_set << " " << w.learner << ": " << w.detail
                     << "\n";
            }
        }
        emit(opts, out, text.str());
    }
    if (!result.passed()) return exit_code::property_failed;
    if (result.incomplete()) return exit_code::budget;
    return exit_code::ok;
}

struct GenerateArgs {
    std::string kind;
    std::size_t dim = 1;
    std::size_t size = 4;
    std::size_t k = 2;
    std::string mode = "separable";
    std::string lattice = "powerset";
    std::string low = "0";
    std::string high = "4";
    std::size_t max_den = 2;
};

int cmd_generate(const Common& opts, const GenerateArgs& g, std::ostream& out, std::ostream& err) {
    Instance inst = named_instance("coll");
    std::string certificate;
    if (g.kind == "random") {
        GeneratorParams p;
        p.dimension = g.dim;
        p.pool_size = g.size;
        p.coord_low = parse_rational(g.low);
        p.coord_high = parse_rational(g.high);
        p.max_denominator = g.max_den;
        p.seed = opts.seed;
        p.mode = parse_label_mode(g.mode);
        p.lattice = parse_lattice_kind(g.lattice);
        inst = generate_random_instance(p);
        const FeatureSet& top = inst.lattice().back();
        certificate = "random " + std::string(to_string(p.mode)) + " instance, seed " + std::to_string(p.seed) +
                      ": " + inst.describe(top) + " linearly sufficient: " +
                      (is_sufficient(inst, top, LearnerKind::linear) ? "yes" : "no");
    } else if (g.kind == "concept-tightness") {
        inst = generate_concept_spec_tightness(g.dim);
        certificate = "concept specification cost " + std::to_string(g.dim + 1);
    } else if (g.kind == "invalidation-tightness") {
        inst = generate_invalidation_tightness(g.dim);
        certificate = "invalidation cost " + std::to_string(g.dim + 2);
    } else if (g.kind == "1nn-explosion") {
        inst = generate_1nn_explosion(g.k);
        certificate = "costs 2 vs " + std::to_string(2 * g.k);
    } else if (g.kind == "thresh4" || g.kind == "xor4" || g.kind == "coll" || g.kind == "edf-chain") {
        inst = named_instance(g.kind);
        certificate = "named instance " + g.kind;
    } else {
        err << "unknown generator kind '" << g.kind << "'\n";
        return exit_code::usage;
    }
    const std::string document = machine(inst.to_json());
    if (opts.out.empty()) {
        out << document;
        err << certificate << "\n";
    } else {
        emit(opts, out, document);
        out << certificate << "\n";
    }
    return exit_code::ok;
}

int code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::BudgetExceeded:
        case ErrorCode::StepLimitExceeded:
            return exit_code::budget;
        case ErrorCode::IllegalAction:
        case ErrorCode::Stuck:
            return exit_code::illegal_script;
        case ErrorCode::InvalidParams:
            return exit_code::usage;
        default:
            return exit_code::invalid_input;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"teachctl: teaching costs and protocols over featurized object pools", "teachctl"};
    app.require_subcommand(1);

    Common opts;
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", opts.format, "table | machine")->check(CLI::IsMember({"table", "machine"}));
        sub->add_option("--out", opts.out, "write the result to a file");
    };

    auto* analyze = app.add_subcommand("analyze", "feature set costs per learner");
    analyze->add_option("--instance", opts.instance)->required();
    analyze->add_option("--learner", opts.learner, "lin | 1nn (default: both)");
    analyze->add_option("--feature-set", opts.feature_set, "comma-separated ids, {} for the empty set, or all");
    analyze->add_option("--budget", opts.budget, "search state budget");
    add_format(analyze);

    std::string script;
    bool optimal = false;
    auto* simulate = app.add_subcommand("simulate", "replay a teacher script or compute optimal teaching costs");
    simulate->add_option("--instance", opts.instance)->required();
    simulate->add_option("--learner", opts.learner, "lin | 1nn");
    simulate->add_option("--protocol", opts.protocol, "open | edf");
    simulate->add_option("--feature-set", opts.feature_set);
    simulate->add_option("--script", script);
    simulate->add_flag("--optimal", optimal);
    simulate->add_option("--budget", opts.budget);
    add_format(simulate);

    std::vector<std::string> properties;
    std::vector<std::string> extra;
    std::size_t trials = VerifyOptions{}.trials;
    auto* verify = app.add_subcommand("verify", "check propositions over seeded instance suites");
    verify->add_option("properties", properties, "P1..P9, L1 or all (default all)");
    verify->add_option("--instance", extra, "additional instance files");
    verify->add_option("--seed", opts.seed);
    verify->add_option("--trials", trials, "random instances per suite");
    verify->add_option("--budget", opts.budget);
    add_format(verify);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a generated instance document");
    generate->add_option("kind", gen.kind,
                         "random | concept-tightness | invalidation-tightness | 1nn-explosion | thresh4 | xor4 | "
                         "coll | edf-chain")
        ->required();
    generate->add_option("--dim", gen.dim);
    generate->add_option("--size", gen.size);
    generate->add_option("--k", gen.k);
    generate->add_option("--mode", gen.mode, "separable | general | insufficient");
    generate->add_option("--lattice", gen.lattice, "chain | powerset");
    generate->add_option("--low", gen.low);
    generate->add_option("--high", gen.high);
    generate->add_option("--max-den", gen.max_den);
    generate->add_option("--seed", opts.seed);
    generate->add_option("--out", opts.out);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(opts, out);
        if (simulate->parsed()) {
            if (simulate->count("--protocol") == 0) opts.protocol.clear();
            return cmd_simulate(opts, script, optimal, out, err);
        }
        if (verify->parsed()) return cmd_verify(opts, properties, trials, extra, out);
        if (generate->parsed()) return cmd_generate(opts, gen, out, err);
    } catch (const TeachError& e) {
        err << e.what() << "\n";
        return code_for(e.code());
    }
    return exit_code::usage;
}

}  // namespace teach
