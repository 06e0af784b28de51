#include "ace/cli/commands.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ace/cli/persist.hpp"
#include "ace/evolve/constitution_io.hpp"
#include "ace/metrics/bleu.hpp"
#include "ace/util/strings.hpp"

namespace ace::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exclusive lock on an output directory for the lifetime of a command.
class DirLock {
public:
    explicit DirLock(const std::string& dir) : path_(dir + "/.lock") {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0)
            throw ConfigError("output directory is locked by another command: " + dir);
    }
    ~DirLock() {
        if (fd_ >= 0) {
            ::close(fd_);
            ::unlink(path_.c_str());
        }
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    std::string path_;
    int fd_ = -1;
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
}

std::string dir_label(const std::string& dir) {
    fs::path p = fs::path(dir).lexically_normal();
    std::string name = p.filename().string();
    if (name.empty() || name == ".") name = p.parent_path().filename().string();
    return name.empty() ? dir : name;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    out << text;
}

struct MeanStd {
    double mean = 0.0, std_dev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd m;
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.std_dev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return m;
}

std::optional<core::Constitution> load_optional_constitution(const std::string& path) {
    if (path.empty() || path == "none") return std::nullopt;
    return evolve::load_constitution(path);
}

std::vector<core::AceRecord> tree_records_in_order(const rollout::RolloutTree& tree) {
    std::vector<core::AceRecord> out;
    for (const auto& [id, rec] : tree.nodes) out.push_back(rec);
    return out;
}

} // namespace

void cmd_rollout(const Config& config, const std::string& task_id, long seed,
                 const std::string& constitution_path, const std::string& out_dir) {
    const core::TaskSpec& task = config.task(task_id);
    if (config.prompts_file.empty()) throw ConfigError("config has no prompts_file");
    auto prompts = read_prompt_file(config.prompts_file);
    if (prompts.empty()) throw ConfigError("prompts file is empty: " + config.prompts_file);

    ensure_dir(out_dir);
    DirLock lock(out_dir);

    Runtime rt(config);
    rt.configure_seed(seed);
    rt.gw.with_request_log(out_dir + "/requests.log.jsonl");

    rollout::RolloutConfig rcfg = config.rollout;
    rcfg.constitution = load_optional_constitution(constitution_path);

    mutate::Mutator mutator(rt.gw, rt.templates, config.mutate);
    autorate::Autorater autorater = rt.make_autorater(task.autorater_id);

    auto trees = rollout::run_rollouts(prompts, task, rcfg, seed, mutator, rt.gw, autorater);

    std::vector<std::string> record_lines, manifest_lines;
    for (const auto& tree : trees) {
        for (const auto& rec : tree_records_in_order(tree))
            record_lines.push_back(record_to_line(rec));
        manifest_lines.push_back(tree_manifest_json(tree).dump());
    }
    write_lines(record_lines, out_dir + "/records.jsonl");
    write_lines(manifest_lines, out_dir + "/trees.jsonl");

    rollout::Harvest h = rollout::harvest_dataset(trees);
    json summary{{"task_id", task_id},
                 {"seed", seed},
                 {"roots", prompts.size()},
                 {"valid_records", h.records.size()},
                 {"positives", h.positives},
                 {"negatives", h.negatives},
                 {"errored", h.errored},
                 {"guided", rcfg.constitution.has_value()}};
    write_text(out_dir + "/summary.json", summary.dump(2) + "\n");
    std::cout << "rollout: " << h.records.size() << " valid records ("
              << h.positives << " positive, " << h.negatives << " negative, " << h.errored
              << " errored) across " << prompts.size() << " roots\n";
}

void cmd_split(const Config& config, const std::string& dataset_dir, long seed,
               const std::array<double, 3>& ratios) {
    auto records = read_records(dataset_dir + "/records.jsonl");
    (void)config;

    std::string split_dir = dataset_dir + "/splits";
    ensure_dir(split_dir);
    DirLock lock(split_dir);

    evolve::SplitDataset split = evolve::build_split(records, ratios, seed);
    write_examples(split.train, split_dir + "/train.jsonl");
    write_examples(split.val, split_dir + "/val.jsonl");
    write_examples(split.test, split_dir + "/test.jsonl");
    json summary{{"seed", seed},
                 {"ratios", ratios},
                 {"train", split.train.size()},
                 {"val", split.val.size()},
                 {"test", split.test.size()}};
    write_text(split_dir + "/summary.json", summary.dump(2) + "\n");
    std::cout << "split: " << split.train.size() << " train / " << split.val.size()
              << " val / " << split.test.size() << " test\n";
}

void cmd_evolve(const Config& config, const std::string& task_id, const std::string& run_dir,
                const ScheduleOverride& overrides) {
    const core::TaskSpec& task = config.task(task_id);
    std::string split_dir = run_dir + "/splits";

    evolve::SplitDataset dataset;
    dataset.train = read_examples(split_dir + "/train.jsonl");
    dataset.val = read_examples(split_dir + "/val.jsonl");
    dataset.test = read_examples(split_dir + "/test.jsonl");
    std::ifstream summary_in(split_dir + "/summary.json");
    if (summary_in) {
        json s;
        summary_in >> s;
        dataset.seed = s.value("seed", 0L);
    }

    evolve::EvolutionSchedule schedule = config.schedule;
    if (overrides.epochs) schedule.epochs = *overrides.epochs;
    if (overrides.batch_size) schedule.batch_size = *overrides.batch_size;
    if (overrides.size_start) schedule.size_start = *overrides.size_start;
    if (overrides.size_end) schedule.size_end = *overrides.size_end;
    if (overrides.change_pct_start) schedule.change_pct_start = *overrides.change_pct_start;
    if (overrides.change_pct_end) schedule.change_pct_end = *overrides.change_pct_end;
    schedule.validate();

    DirLock lock(run_dir);
    Runtime rt(config);
    rt.configure_seed(dataset.seed);
    rt.gw.with_request_log(run_dir + "/requests.evolve.jsonl");

    evolve::Evolver evolver(rt.gw, rt.templates, config.evolve);
    auto [best, reports] = evolver.run_evolution(dataset, task, schedule);

    evolve::save_constitution(best, run_dir + "/constitution.txt");
    std::vector<std::string> lines;
    for (const auto& r : reports) lines.push_back(to_json(r).dump());
    write_lines(lines, run_dir + "/epochs.jsonl");
    std::cout << "evolve: " << reports.size() << " epochs, final val accuracy "
              << (reports.empty() ? 0.0 : reports.back().best_val_accuracy)
              << ", test accuracy "
              << (reports.empty() ? 0.0 : reports.back().test_accuracy) << "\n";
}

void cmd_eval(const Config& config, const std::string& task_id,
              const std::string& constitution_path, const std::string& prompts_file,
              const std::string& out_dir) {
    const core::TaskSpec& task = config.task(task_id);
    auto constitution = load_optional_constitution(constitution_path);
    if (!constitution) throw ConfigError("eval needs a constitution file");
    auto prompts = read_prompt_file(prompts_file);
    if (prompts.empty()) throw ConfigError("prompts file is empty: " + prompts_file);

    ensure_dir(out_dir + "/eval");
    DirLock lock(out_dir + "/eval");
    Runtime rt(config);
    rt.gw.with_request_log(out_dir + "/eval/requests.jsonl");

    mutate::Mutator mutator(rt.gw, rt.templates, config.mutate);
    autorate::Autorater autorater = rt.make_autorater(task.autorater_id);

    rollout::RolloutConfig unguided_cfg = config.rollout;
    unguided_cfg.constitution.reset();
    rollout::RolloutConfig guided_cfg = config.rollout;
    guided_cfg.constitution = constitution;

    std::vector<double> rates_unguided, rates_guided, sb_unguided, sb_guided;
    std::vector<std::vector<std::pair<int, double>>> curves_unguided, curves_guided;

    for (long seed : config.rollout.seeds) {
        rt.configure_seed(seed);
        auto trees_u =
            rollout::run_rollouts(prompts, task, unguided_cfg, seed, mutator, rt.gw, autorater);
        auto trees_g =
            rollout::run_rollouts(prompts, task, guided_cfg, seed, mutator, rt.gw, autorater);

        rates_unguided.push_back(rollout::success_rate(trees_u, {seed}).mean);
        rates_guided.push_back(rollout::success_rate(trees_g, {seed}).mean);
        curves_unguided.push_back(rollout::cumulative_success_curve(trees_u));
        curves_guided.push_back(rollout::cumulative_success_curve(trees_g));

        // diversity of the final prompts of sampled sequences
        auto final_texts = [&](const std::vector<rollout::RolloutTree>& trees) {
            std::vector<std::string> texts;
            util::SeededRng rng(util::hash64("success_rate", static_cast<std::uint64_t>(seed)));
            for (const auto& tree : trees) {
                std::string leaf = rollout::sample_leaf(tree, rng);
                auto it = tree.nodes.find(leaf);
                texts.push_back(it == tree.nodes.end() ? tree.root.text
                                                       : it->second.prompt_after.text);
            }
            return texts;
        };
        if (prompts.size() >= 2) {
            sb_unguided.push_back(metrics::self_bleu(final_texts(trees_u)));
            sb_guided.push_back(metrics::self_bleu(final_texts(trees_g)));
        }
    }

    auto avg_curve = [](const std::vector<std::vector<std::pair<int, double>>>& curves) {
        std::vector<std::pair<int, double>> avg;
        if (curves.empty()) return avg;
        for (std::size_t d = 0; d < curves[0].size(); ++d) {
            double sum = 0.0;
            for (const auto& c : curves) sum += c[d].second;
            avg.emplace_back(curves[0][d].first, sum / static_cast<double>(curves.size()));
        }
        return avg;
    };

    MeanStd ru = mean_std(rates_unguided), rg = mean_std(rates_guided);
    MeanStd su = mean_std(sb_unguided), sg = mean_std(sb_guided);

    metrics::ReportRow row;
    // run_label stays empty here; cmd_report stamps the directory label so
    // the metrics file itself is location-independent (replay-comparable)
    row.task_id = task_id;
    row.model_id = task.target_model_id;
    row.ace_rate_mean = ru.mean;
    row.ace_rate_std = ru.std_dev;
    row.cace_rate_mean = rg.mean;
    row.cace_rate_std = rg.std_dev;
    if (prompts.size() >= 2) {
        row.selfbleu_starter = metrics::self_bleu(prompts);
        row.selfbleu_ace_mean = su.mean;
        row.selfbleu_ace_std = su.std_dev;
        row.selfbleu_cace_mean = sg.mean;
        row.selfbleu_cace_std = sg.std_dev;
    }
    write_lines({to_json(row).dump()}, out_dir + "/eval/metrics.jsonl");

    auto curve_json = [](const std::string& label,
                         const std::vector<std::pair<int, double>>& points) {
        json pts = json::array();
        for (const auto& [d, p] : points) pts.push_back({d, p});
        return json{{"label", label}, {"points", pts}}.dump();
    };
    write_lines({curve_json("ace", avg_curve(curves_unguided)),
                 curve_json("ace_constitution", avg_curve(curves_guided))},
                out_dir + "/eval/curves.jsonl");

    std::cout << "eval: success rate " << ru.mean << " unguided vs " << rg.mean
              << " guided over " << config.rollout.seeds.size() << " seeds\n";
}

void cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
    ensure_dir(out_dir);
    DirLock lock(out_dir);

    std::vector<metrics::ReportRow> rows;
    std::vector<metrics::Curve> curves;
    for (const auto& dir : run_dirs) {
        std::string label = dir_label(dir);
        metrics::ReportRow row;
        row.run_label = label;
        bool have_metrics = false;

        std::string metrics_path = dir + "/eval/metrics.jsonl";
        if (fs::exists(metrics_path)) {
            for (const auto& line : read_lines(metrics_path)) {
                if (util::trim(line).empty()) continue;
                row = report_row_from_json(json::parse(line));
                row.run_label = label;
                have_metrics = true;
            }
        }
        std::string epochs_path = dir + "/epochs.jsonl";
        if (fs::exists(epochs_path)) {
            auto lines = read_lines(epochs_path);
            std::vector<evolve::EpochReport> reports;
            for (const auto& line : lines) {
                if (util::trim(line).empty()) continue;
                reports.push_back(epoch_report_from_json(json::parse(line)));
            }
            if (!reports.empty()) {
                row.surrogate_initial = reports.front().test_accuracy;
                row.surrogate_final = reports.back().test_accuracy;
                have_metrics = true;
            }
        }
        if (have_metrics) rows.push_back(row);

        std::string curves_path = dir + "/eval/curves.jsonl";
        if (fs::exists(curves_path)) {
            for (const auto& line : read_lines(curves_path)) {
                if (util::trim(line).empty()) continue;
                json j = json::parse(line);
                metrics::Curve c;
                c.label = label + ":" + j.at("label").get<std::string>();
                for (const auto& p : j.at("points"))
                    c.points.emplace_back(p.at(0).get<int>(), p.at(1).get<double>());
                curves.push_back(std::move(c));
            }
        }
    }
    if (rows.empty()) throw ConfigError("no metrics or epoch reports found in the run dirs");

    std::string table = metrics::render_table(rows);
    write_text(out_dir + "/table.txt", table);
    std::vector<std::string> row_lines;
    for (const auto& r : rows) row_lines.push_back(to_json(r).dump());
    write_lines(row_lines, out_dir + "/report.jsonl");
    if (!curves.empty()) write_text(out_dir + "/curves.svg", metrics::render_curves_svg(curves));
    std::cout << table;
}

void cmd_export_templates(const std::string& out_dir) {
    ensure_dir(out_dir);
    mutate::TemplateSet set = mutate::TemplateSet::defaults();
    for (const auto& name : mutate::TemplateSet::names())
        write_text(out_dir + "/" + name + ".txt", set.get(name));
    std::cout << "wrote " << mutate::TemplateSet::names().size() << " templates to "
              << out_dir << "\n";
}

} // namespace ace::cli
