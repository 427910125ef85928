// Command-line front end: preprocess | train | eval | attack | report.
// Every run is driven by a JSON config; flag overrides win over the file.
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <phishkit/experiment.hpp>

namespace {

// "a.b.c=value" -> config["a"]["b"]["c"] = parsed value (JSON if it parses,
// raw string otherwise)
void apply_set_override(nlohmann::json& config, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw phishkit::ConfigError("--set expects key.path=value, got: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);

    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception&) {
        value = raw;
    }

    nlohmann::json* node = &config;
    std::size_t begin = 0;
    while (true) {
        const auto dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot - begin);
        if (key.empty()) throw phishkit::ConfigError("--set: empty key segment in " + path);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            break;
        }
        node = &(*node)[key];
        begin = dot + 1;
    }
}

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> sets;
    std::string output_dir;
    std::string level;
    std::string featurizer;
    std::string model;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-c,--config", opts.config_path, "experiment config file (JSON)")
        ->required();
    cmd->add_option("--set", opts.sets, "override a config field: key.path=value")
        ->take_all();
    cmd->add_option("--output-dir", opts.output_dir, "override output_dir");
    cmd->add_option("--level", opts.level, "override preprocess.level");
    cmd->add_option("--featurizer", opts.featurizer, "override featurizer.kind");
    cmd->add_option("--model", opts.model, "override model.variant");
}

phishkit::ExperimentConfig build_config(const CommonOpts& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw phishkit::ConfigError("cannot open config file: " + opts.config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw phishkit::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!opts.output_dir.empty()) j["output_dir"] = opts.output_dir;
    if (!opts.level.empty()) j["preprocess"]["level"] = opts.level;
    if (!opts.featurizer.empty()) j["featurizer"]["kind"] = opts.featurizer;
    if (!opts.model.empty()) j["model"]["variant"] = opts.model;
    for (const auto& s : opts.sets) apply_set_override(j, s);
    return phishkit::parse_experiment_config(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phishing email detection and adversarial robustness toolkit"};
    app.require_subcommand(1);

    CommonOpts preprocess_opts, train_opts, eval_opts, attack_opts;
    std::string report_path;

    auto* cmd_pre = app.add_subcommand("preprocess", "tokenize datasets and write summaries");
    add_common(cmd_pre, preprocess_opts);
    auto* cmd_tr = app.add_subcommand("train", "split, fit featurizer, train and evaluate");
    add_common(cmd_tr, train_opts);
    auto* cmd_ev = app.add_subcommand("eval", "evaluate the trained model on the eval dataset");
    add_common(cmd_ev, eval_opts);
    auto* cmd_at = app.add_subcommand("attack", "run attack recipes and the recovery loop");
    add_common(cmd_at, attack_opts);
    auto* cmd_re = app.add_subcommand("report", "render a JSON report as a table");
    cmd_re->add_option("report_file", report_path, "path to a report JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_pre->parsed()) {
            phishkit::cmd_preprocess(build_config(preprocess_opts));
            std::cout << "preprocess: ok\n";
        } else if (cmd_tr->parsed()) {
            std::cout << phishkit::render_report(phishkit::cmd_train(build_config(train_opts)));
        } else if (cmd_ev->parsed()) {
            std::cout << phishkit::render_report(phishkit::cmd_eval(build_config(eval_opts)));
        } else if (cmd_at->parsed()) {
            std::cout << phishkit::render_report(phishkit::cmd_attack(build_config(attack_opts)));
        } else if (cmd_re->parsed()) {
            std::cout << phishkit::cmd_report(report_path);
        }
    } catch (const phishkit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
