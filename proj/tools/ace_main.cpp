#include <array>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ace/cli/commands.hpp"

namespace {

ace::cli::Config load(const std::string& path) {
    if (path.empty()) throw ace::ConfigError("--config is required for this command");
    return ace::cli::load_config(path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constitution-guided atomic concept edits for generative model steering"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "Path to the run configuration (JSON)");

    // rollout
    auto* rollout = app.add_subcommand("rollout", "Generate edit rollouts for a task");
    std::string ro_task, ro_constitution = "none", ro_out;
    long ro_seed = 1;
    rollout->add_option("--task", ro_task, "Task id from the config")->required();
    rollout->add_option("--seed", ro_seed, "Run seed");
    rollout->add_option("--constitution", ro_constitution,
                        "Constitution file, or 'none' for unguided");
    rollout->add_option("--out", ro_out, "Output run directory")->required();

    // split
    auto* split = app.add_subcommand("split", "Split a rollout dataset for evolution");
    std::string sp_dir;
    long sp_seed = 7;
    std::vector<double> sp_ratios{0.6, 0.2, 0.2};
    split->add_option("dir", sp_dir, "Run directory containing records.jsonl")->required();
    split->add_option("--seed", sp_seed, "Split seed");
    split->add_option("--ratios", sp_ratios, "Train/val/test ratios")->expected(3);

    // evolve
    auto* evolve = app.add_subcommand("evolve", "Evolve a constitution on the splits");
    std::string ev_task, ev_dir;
    ace::cli::ScheduleOverride ov;
    int ov_epochs = -1, ov_batch = -1, ov_size_start = -1, ov_size_end = -1;
    double ov_pct_start = -1, ov_pct_end = -1;
    evolve->add_option("--task", ev_task, "Task id from the config")->required();
    evolve->add_option("dir", ev_dir, "Run directory containing splits/")->required();
    evolve->add_option("--epochs", ov_epochs, "Override schedule epochs");
    evolve->add_option("--batch-size", ov_batch, "Override batch size");
    evolve->add_option("--size-start", ov_size_start, "Override constitution size at epoch 0");
    evolve->add_option("--size-end", ov_size_end, "Override constitution size at epoch E");
    evolve->add_option("--change-start", ov_pct_start, "Override change % at the first epoch");
    evolve->add_option("--change-end", ov_pct_end, "Override change % at the last epoch");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a constitution on held-out prompts");
    std::string el_task, el_constitution, el_prompts, el_out;
    eval->add_option("--task", el_task, "Task id from the config")->required();
    eval->add_option("--constitution", el_constitution, "Constitution file")->required();
    eval->add_option("--prompts", el_prompts,
                     "Held-out prompts file (default: eval_prompts_file from the config)");
    eval->add_option("--out", el_out, "Output run directory")->required();

    // report
    auto* report = app.add_subcommand("report", "Render the metrics table and curves");
    std::vector<std::string> rp_dirs;
    std::string rp_out;
    report->add_option("dirs", rp_dirs, "One or more run directories")->required();
    report->add_option("--out", rp_out, "Report output directory")->required();

    // templates
    auto* templates = app.add_subcommand("templates", "Export the built-in prompt templates");
    std::string tp_out = "templates";
    templates->add_option("--out", tp_out, "Directory for the template files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rollout->parsed()) {
            auto config = load(config_path);
            ace::cli::cmd_rollout(config, ro_task, ro_seed, ro_constitution, ro_out);
        } else if (split->parsed()) {
            auto config = load(config_path);
            ace::cli::cmd_split(config, sp_dir, sp_seed,
                                {sp_ratios[0], sp_ratios[1], sp_ratios[2]});
        } else if (evolve->parsed()) {
            auto config = load(config_path);
            if (ov_epochs > 0) ov.epochs = ov_epochs;
            if (ov_batch > 0) ov.batch_size = ov_batch;
            if (ov_size_start > 0) ov.size_start = ov_size_start;
            if (ov_size_end > 0) ov.size_end = ov_size_end;
            if (ov_pct_start > 0) ov.change_pct_start = ov_pct_start;
            if (ov_pct_end > 0) ov.change_pct_end = ov_pct_end;
            ace::cli::cmd_evolve(config, ev_task, ev_dir, ov);
        } else if (eval->parsed()) {
            auto config = load(config_path);
            if (el_prompts.empty()) el_prompts = config.eval_prompts_file;
            if (el_prompts.empty())
                throw ace::ConfigError(
                    "no held-out prompts: pass --prompts or set eval_prompts_file");
            ace::cli::cmd_eval(config, el_task, el_constitution, el_prompts, el_out);
        } else if (report->parsed()) {
            ace::cli::cmd_report(rp_dirs, rp_out);
        } else if (templates->parsed()) {
            ace::cli::cmd_export_templates(tp_out);
        }
    } catch (const ace::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ace::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ace::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ace::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ace::Error& e) {
        std::cerr << "internal error [" << e.tag() << "]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
