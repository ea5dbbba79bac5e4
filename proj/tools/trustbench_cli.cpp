// trustbench CLI: curate | perturb | elicit | evaluate | report.
// One config file drives every stage; per-stage flag overrides are
// recorded into the stage summaries through the effective config.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trustbench/config.hpp"
#include "trustbench/stages.hpp"

using namespace trustbench;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_override;
    std::string models_csv;
    std::string variants_csv;
    size_t limit = 0;
    uint64_t seed = 0;
    bool seed_set = false;
    bool resume = false;
};

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

RunConfig effective_config(const CommonFlags& flags) {
    RunConfig cfg = load_config(flags.config_path);
    if (!flags.out_override.empty()) cfg.output_root = flags.out_override;
    if (!flags.models_csv.empty()) cfg.models = split_csv(flags.models_csv);
    if (!flags.variants_csv.empty()) {
        cfg.variants.clear();
        for (const auto& v : split_csv(flags.variants_csv)) {
            auto parsed = variant_from_string(v);
            if (!parsed) throw Error("CONFIG_INVALID", "unknown variant " + v);
            cfg.variants.push_back(*parsed);
        }
    }
    if (flags.limit > 0) cfg.sample_limit = flags.limit;
    if (flags.seed_set) cfg.seed = flags.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", flags.out_override, "override the output root");
    cmd->add_option("--models", flags.models_csv, "comma-separated model id subset");
    cmd->add_option("--variants", flags.variants_csv, "comma-separated variant subset");
    cmd->add_option("--limit", flags.limit, "cap samples per variant");
    cmd->add_option("--seed", flags.seed, "override the run seed")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
}

int run_stage(const std::string& name, const CommonFlags& flags) {
    try {
        RunConfig cfg = effective_config(flags);
        json summary;
        if (name == "curate") summary = stage_curate(cfg);
        else if (name == "perturb") summary = stage_perturb(cfg);
        else if (name == "elicit") summary = stage_elicit(cfg, flags.resume);
        else if (name == "evaluate") summary = stage_evaluate(cfg);
        else if (name == "report") summary = stage_report(cfg);
        std::cout << summary.dump(2) << std::endl;
        return 0;
    } catch (const Error& e) {
        json failure{{"error", e.code()}, {"message", e.what()}, {"detail", e.detail()}};
        std::cerr << failure.dump(2) << std::endl;
        return 1;
    } catch (const std::exception& e) {
        json failure{{"error", "UNEXPECTED"}, {"message", e.what()}};
        std::cerr << failure.dump(2) << std::endl;
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"perturbation-aligned artifact-trust benchmark pipeline"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string selected;
    for (const char* name : {"curate", "perturb", "elicit", "evaluate", "report"}) {
        CLI::App* cmd = app.add_subcommand(name, std::string("run the ") + name + " stage");
        add_common(cmd, flags);
        if (std::string(name) == "elicit")
            cmd->add_flag("--resume", flags.resume, "continue an interrupted run");
        cmd->callback([&selected, name]() { selected = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return run_stage(selected, flags);
}
