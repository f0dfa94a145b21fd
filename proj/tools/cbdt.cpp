// Command-line surface of the case-based decision engine.
//
// Exit codes: 0 success, 1 domain error (invariant violation, empty memory,
// malformed document), 2 usage error (bad arguments, missing file).

#include <cctype>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cbdt/cbdt.hpp"

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::pair<std::string, std::string> split_once(const std::string& s, char sep,
                                               const std::string& what) {
    const auto pos = s.find(sep);
    if (pos == std::string::npos)
        throw UsageError("expected '" + std::string(1, sep) + "' in " + what + " '" + s + "'");
    return {s.substr(0, pos), s.substr(pos + 1)};
}

/// Trailing "@N" (digits only) split off a spec string, if present.
std::pair<std::string, std::optional<std::size_t>> split_position(const std::string& s) {
    const auto pos = s.rfind('@');
    if (pos == std::string::npos || pos + 1 == s.size() || s.size() - pos > 10)
        return {s, std::nullopt};
    for (std::size_t i = pos + 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return {s, std::nullopt};
    return {s.substr(0, pos), std::stoul(s.substr(pos + 1))};
}

cbdt::Problem parse_coords(const std::vector<std::string>& coords) {
    cbdt::Problem p;
    for (const auto& c : coords) {
        auto [fid, label] = split_once(c, '=', "coordinate");
        if (!p.coordinates.emplace(fid, label).second)
            throw UsageError("coordinate for feature '" + fid + "' given twice");
    }
    return p;
}

/// "id=v1|v2|v3[@default_rank]", with an optional display name via
/// "id:name=...". Values are opaque labels; their order is the linear order.
cbdt::Feature parse_feature_spec(const std::string& spec) {
    auto [head, tail] = split_once(spec, '=', "feature spec");
    cbdt::Feature f;
    const auto colon = head.find(':');
    f.id = colon == std::string::npos ? head : head.substr(0, colon);
    f.name = colon == std::string::npos ? "" : head.substr(colon + 1);
    auto [values, rank] = split_position(tail);
    std::size_t start = 0;
    while (true) {
        const auto bar = values.find('|', start);
        f.values.push_back(values.substr(start, bar - start));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    f.default_rank = rank.value_or(0);
    cbdt::validate(f);
    return f;
}

cbdt::UtilityFunction parse_utility(const std::string& spec, const std::string& table_file) {
    if (!table_file.empty()) {
        std::ifstream in(table_file);
        if (!in) throw UsageError("cannot open utility table '" + table_file + "'");
        nlohmann::json doc;
        in >> doc;
        std::map<cbdt::Rational, cbdt::Rational> entries;
        for (const auto& [outcome, util] : doc.items())
            entries.emplace(cbdt::Rational::parse(outcome),
                            cbdt::Rational::parse(util.is_string() ? util.get<std::string>()
                                                                   : util.dump()));
        return cbdt::UtilityFunction::table(std::move(entries));
    }
    if (spec == "identity") return cbdt::UtilityFunction::identity();
    if (spec.rfind("affine:", 0) == 0) {
        auto [a, b] = split_once(spec.substr(7), ',', "affine utility");
        return cbdt::UtilityFunction::affine(cbdt::Rational::parse(a), cbdt::Rational::parse(b));
    }
    throw UsageError("unknown utility '" + spec + "' (identity | affine:SCALE,SHIFT)");
}

cbdt::Memory load_memory_checked(const std::string& path, bool print_warnings) {
    if (!std::filesystem::exists(path))
        throw UsageError("memory file '" + path + "' does not exist");
    std::vector<std::string> warnings;
    cbdt::Memory m = cbdt::load_memory_file(path, &warnings);
    if (print_warnings)
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return m;
}

void write_evolved(const cbdt::Memory& memory, const std::string& memory_path,
                   const std::string& output, bool in_place) {
    if (in_place)
        cbdt::save_memory_file(memory, memory_path);
    else if (!output.empty())
        cbdt::save_memory_file(memory, output);
    else
        throw UsageError("give --output FILE or --in-place to store the result");
}

void emit(bool machine, const nlohmann::json& j, const std::string& text) {
    if (machine)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"case-based decision engine over a discrete feature lattice"};
    app.require_subcommand(1);
    bool machine = false;
    app.add_flag("--machine", machine, "emit machine-readable JSON instead of text");

    // Shared option storage; each subcommand binds the pieces it needs.
    std::string memory_path, output, scenario_path, utility_spec = "identity", utility_table;
    std::string updated_path, rates_in, rates_out, feature_id, value_label, subspace, delta_text = "0";
    std::vector<std::string> coords, feature_specs, new_values, new_features, actions;
    std::string action_id, result_text;
    bool in_place = false;
    long batch_size = 1, samples = 1000;
    std::uint64_t seed = 0;
    std::size_t position = SIZE_MAX;

    const auto add_memory = [&](CLI::App* cmd) {
        cmd->add_option("--memory", memory_path, "memory document")->required();
    };
    const auto add_write = [&](CLI::App* cmd) {
        cmd->add_option("-o,--output", output, "where to write the resulting memory");
        cmd->add_flag("--in-place", in_place, "overwrite the input memory file");
    };
    const auto add_utility = [&](CLI::App* cmd) {
        cmd->add_option("--utility", utility_spec, "identity | affine:SCALE,SHIFT");
        cmd->add_option("--utility-table", utility_table, "JSON file mapping outcomes to utilities");
    };

    CLI::App* init = app.add_subcommand("init", "create an empty memory document");
    init->add_option("--feature", feature_specs, "feature as id[:name]=v1|v2|...[@default_rank]")
        ->required();
    init->add_option("--action", actions, "action id (repeat for each action)")->required();
    init->add_option("-o,--output", output, "memory file to create")->required();

    CLI::App* addc = app.add_subcommand("add-case", "append a case to a memory");
    add_memory(addc);
    addc->add_option("--coord", coords, "problem coordinate FEATURE=VALUE")->required();
    addc->add_option("--action", action_id, "action taken")->required();
    addc->add_option("--result", result_text, "result (integer, decimal, or num/den)")->required();
    add_write(addc);

    CLI::App* dec = app.add_subcommand("decide", "choose the best action for a query problem");
    add_memory(dec);
    dec->add_option("--coord", coords, "query coordinate FEATURE=VALUE")->required();
    dec->add_option("--new-value", new_values,
                    "novel value FEATURE=LABEL[@POS] (extends the space first)");
    dec->add_option("--new-feature", new_features,
                    "novel feature id[:name]=v1|v2|...[@default_rank]");
    add_utility(dec);
    add_write(dec);

    CLI::App* decr = app.add_subcommand("decide-restricted",
                                        "decide comparing only selected aspects");
    add_memory(decr);
    decr->add_option("--coord", coords, "query coordinate FEATURE=VALUE")->required();
    decr->add_option("--subspace", subspace, "comma-separated feature ids")->required();
    decr->add_option("--delta", delta_text, "similarity threshold in [0,1], e.g. 1/2")->required();
    add_utility(decr);

    CLI::App* extv = app.add_subcommand("extend-value", "insert a new value into a feature range");
    add_memory(extv);
    extv->add_option("--feature", feature_id, "feature id")->required();
    extv->add_option("--value", value_label, "new value label")->required();
    extv->add_option("--position", position, "insertion index (default: append)");
    add_write(extv);

    CLI::App* extf = app.add_subcommand("extend-feature", "append a new feature to the space");
    add_memory(extf);
    extf->add_option("--feature", feature_specs, "feature as id[:name]=v1|v2|...[@default_rank]")
        ->required();
    add_write(extf);

    CLI::App* rates = app.add_subcommand("rates", "estimate novelty arrival rates");
    rates->add_option("--memory", memory_path, "memory before the new problems")->required();
    rates->add_option("--updated", updated_path, "memory after the new problems")->required();
    rates->add_option("--rates-in", rates_in, "rate snapshot to continue from");
    rates->add_option("--rates-out", rates_out, "where to write the updated snapshot");
    rates->add_option("--batch-size", batch_size, "re-estimation cadence in problems");

    CLI::App* wait = app.add_subcommand("wait", "compare acting now against waiting");
    add_memory(wait);
    wait->add_option("--coord", coords, "current query coordinate FEATURE=VALUE")->required();
    wait->add_option("--scenario", scenario_path, "scenario document")->required();
    wait->add_option("--rates", rates_in, "rate snapshot overriding the scenario's rates");
    add_utility(wait);

    CLI::App* verify = app.add_subcommand("verify", "run the executable property checks");
    add_memory(verify);
    verify->add_option("--coord", coords, "query coordinate for the representation check");
    verify->add_option("--samples", samples, "sampled instances per check");
    verify->add_option("--seed", seed, "sampler seed");

    CLI::App* dump = app.add_subcommand("dump-similarity", "distances and similarities in memory");
    add_memory(dump);
    dump->add_option("--coord", coords, "optional query coordinate FEATURE=VALUE");

    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
        sub->fallthrough(); // lets --machine follow the subcommand name

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*init) {
            cbdt::Memory m;
            for (const auto& spec : feature_specs)
                m.space.features.push_back(parse_feature_spec(spec));
            for (const auto& a : actions) m.actions.insert(cbdt::ActionId{a});
            cbdt::validate(m);
            cbdt::save_memory_file(m, output);
        } else if (*addc) {
            cbdt::Memory m = load_memory_checked(memory_path, true);
            cbdt::Case c{parse_coords(coords), cbdt::ActionId{action_id},
                         cbdt::Outcome{cbdt::Rational::parse(result_text)}};
            if (c.result.value < cbdt::Rational(0) || c.result.value > cbdt::Rational(10))
                std::cerr << "warning: result " << c.result.value.str()
                          << " lies outside the usual satisfaction range [0,10]\n";
            write_evolved(cbdt::add_case(m, std::move(c)), memory_path, output, in_place);
        } else if (*dec) {
            cbdt::Memory m = load_memory_checked(memory_path, true);
            cbdt::RawQuery raw;
            raw.coordinates = parse_coords(coords);
            for (const auto& nv : new_values) {
                auto [fid, rest] = split_once(nv, '=', "new value");
                auto [label, pos] = split_position(rest);
                const cbdt::Feature& f = m.space.at(fid);
                raw.new_values.push_back({fid, label, pos.value_or(f.values.size())});
            }
            for (const auto& nf : new_features)
                raw.new_features.push_back(parse_feature_spec(nf));
            auto [evolved, report] = cbdt::evolve_then_decide(m, raw, parse_utility(utility_spec, utility_table));
            if (in_place || !output.empty())
                write_evolved(evolved, memory_path, output, in_place);
            emit(machine, cbdt::decision_to_json(report), cbdt::render_decision_text(report));
        } else if (*decr) {
            cbdt::Memory m = load_memory_checked(memory_path, true);
            cbdt::SubspaceSelector selector;
            std::size_t start = 0;
            while (true) {
                const auto comma = subspace.find(',', start);
                selector.feature_ids.push_back(subspace.substr(start, comma - start));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
            const auto report =
                cbdt::decide_restricted(m, parse_coords(coords), parse_utility(utility_spec, utility_table),
                                        selector, cbdt::Rational::parse(delta_text));
            emit(machine, cbdt::decision_to_json(report), cbdt::render_decision_text(report));
        } else if (*extv) {
            cbdt::Memory m = load_memory_checked(memory_path, true);
            const std::size_t at =
                position == SIZE_MAX ? m.space.at(feature_id).values.size() : position;
            write_evolved(cbdt::with_space(m, cbdt::extend_with_value(m.space, feature_id,
                                                                      value_label, at)),
                          memory_path, output, in_place);
        } else if (*extf) {
            cbdt::Memory m = load_memory_checked(memory_path, true);
            cbdt::FeatureSpace space = m.space;
            for (const auto& spec : feature_specs)
                space = cbdt::extend_with_feature(space, parse_feature_spec(spec));
            write_evolved(cbdt::with_space(m, std::move(space)), memory_path, output, in_place);
        } else if (*rates) {
            const cbdt::Memory before = load_memory_checked(memory_path, false);
            const cbdt::Memory after = load_memory_checked(updated_path, false);
            cbdt::RateModel model;
            if (!rates_in.empty()) {
                std::ifstream in(rates_in);
                if (!in) throw UsageError("cannot open rate snapshot '" + rates_in + "'");
                nlohmann::json doc;
                in >> doc;
                model = cbdt::load_rates(doc);
            }
            model.batch_size = batch_size;
            model = cbdt::estimate_rates(model, before, after);
            if (!rates_out.empty()) {
                std::ofstream out(rates_out);
                out << cbdt::save_rates(model).dump(2) << "\n";
            }
            emit(machine, cbdt::save_rates(model), cbdt::render_rates_text(model));
        } else if (*wait) {
            const cbdt::Memory m = load_memory_checked(memory_path, true);
            if (!std::filesystem::exists(scenario_path))
                throw UsageError("scenario file '" + scenario_path + "' does not exist");
            auto [scenario, model] = cbdt::load_scenario_file(scenario_path);
            if (!rates_in.empty()) {
                std::ifstream in(rates_in);
                if (!in) throw UsageError("cannot open rate snapshot '" + rates_in + "'");
                nlohmann::json doc;
                in >> doc;
                model = cbdt::load_rates(doc);
            }
            const auto valuation = cbdt::evaluate_wait(m, parse_coords(coords), scenario, model,
                                                       parse_utility(utility_spec, utility_table));
            emit(machine, cbdt::lottery_to_json(valuation), cbdt::render_lottery_text(valuation));
        } else if (*verify) {
            const cbdt::Memory m = load_memory_checked(memory_path, false);
            if (m.cases.empty() && coords.empty())
                throw UsageError("an empty memory needs an explicit --coord query for the "
                                 "representation check");
            const cbdt::Problem query =
                coords.empty() ? m.cases.front().problem : parse_coords(coords);
            std::vector<std::pair<cbdt::CheckResult, bool>> checks;
            checks.emplace_back(cbdt::check_metric(m.space, samples, seed), false);
            checks.emplace_back(cbdt::check_symmetry_product(m.space, m, samples, seed), false);
            checks.emplace_back(
                cbdt::check_representation(m, query, cbdt::UtilityFunction::identity(), samples, seed),
                false);
            checks.emplace_back(cbdt::check_similarity_chain_bound(m.space, m, samples, seed), true);
            bool failed = false;
            nlohmann::json j = nlohmann::json::array();
            std::string text;
            for (const auto& [check, expected] : checks) {
                failed = failed || (!expected && !check.passed());
                j.push_back(cbdt::check_to_json(check, expected));
                text += cbdt::render_check_text(check, expected);
            }
            emit(machine, j, text);
            return failed ? 1 : 0;
        } else if (*dump) {
            const cbdt::Memory m = load_memory_checked(memory_path, false);
            const std::optional<cbdt::Problem> query =
                coords.empty() ? std::nullopt
                               : std::optional(cbdt::complete_problem(m.space, parse_coords(coords)));
            const auto report = cbdt::pairwise_similarity(m.space, m, query);
            emit(machine, cbdt::distances_to_json(report), cbdt::render_distances_text(report));
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const cbdt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed document: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
