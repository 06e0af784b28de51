#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ace/cli/commands.hpp"
#include "ace/cli/persist.hpp"
#include "ace/mutate/templates.hpp"
#include "ace/util/rng.hpp"

using namespace ace;
using namespace ace::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("ace_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

nlohmann::json base_config_json(const fs::path& dir) {
    return nlohmann::json{
        {"gateway",
         {{"fan_out", 4},
          {"ace_model", "sim"},
          {"backends",
           {{"sim",
             {{"kind", "mock"},
              {"world", "word_count"},
              {"seed", 40},
              {"params",
               {{"p_base", 0.35}, {"p_token", 0.9}, {"token", "concise"}}}}}}}}},
        {"tasks",
         {{"wordcount",
           {{"description", "force the model to adhere to a word count constraint"},
            {"autorater", "wc"},
            {"target_model", "sim"}}}}},
        {"autoraters", {{"wc", {{"kind", "word_count"}, {"word_limit", 50}}}}},
        {"rollout",
         {{"branching", 2}, {"max_depth", 2}, {"seeds", {1, 2}}, {"root_workers", 2}}},
        {"evolve",
         {{"epochs", 2},
          {"batch_size", 16},
          {"size_start", 4},
          {"size_end", 4},
          {"change_pct_start", 50.0},
          {"change_pct_end", 50.0}}},
        {"split", {{"ratios", {0.5, 0.25, 0.25}}, {"seed", 5}}},
        {"prompts_file", (dir / "prompts.txt").string()},
    };
}

void write_prompts(const fs::path& path, int n) {
    std::ofstream out(path);
    const char* stems[] = {"How to cook an omelette with", "Ways to train a puppy with",
                           "How to plan a hiking trip with",
                           "Describe the harbor skyline with"};
    for (int i = 0; i < n; ++i)
        out << stems[i % 4] << " variation number " << i << "\n";
}

} // namespace

TEST_CASE("config round-trips through parse -> emit -> parse") {
    auto dir = fresh_dir("roundtrip");
    write_prompts(dir / "prompts.txt", 4);
    Config c1 = parse_config(base_config_json(dir));
    nlohmann::json emitted = to_json(c1);
    Config c2 = parse_config(emitted);
    CHECK(to_json(c2) == emitted);
    CHECK(c2.tasks.at("wordcount").autorater_id == "wc");
    CHECK(c2.gateway.backends.at("sim").word_params.p_token == doctest::Approx(0.9));
}

TEST_CASE("config validation rejects dangling references") {
    auto dir = fresh_dir("validate");
    auto j = base_config_json(dir);
    j["tasks"]["wordcount"]["autorater"] = "missing";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base_config_json(dir);
    j["tasks"]["wordcount"]["target_model"] = "missing";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base_config_json(dir);
    j["evolve"]["epochs"] = 0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = base_config_json(dir);
    j["gateway"]["backends"]["sim"]["kind"] = "teapot";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("ace records serialize bit-identically through a round trip") {
    util::SeededRng rng(2024);
    const char* labels[] = {"sheep", "grassy field", "time of day", "frisbee", "harbor"};
    for (int i = 0; i < 200; ++i) {
        core::Prompt root;
        root.id = "t/7/" + std::to_string(i);
        root.text = "root text " + std::to_string(rng.below(1000));
        core::AtomicConceptEdit edit;
        switch (rng.below(3)) {
            case 0:
                edit = core::make_remove_edit(
                    {labels[rng.below(5)], core::ConceptKind::Explicit, "note"});
                break;
            case 1:
                edit = core::make_add_edit(
                    {labels[rng.below(5)], core::ConceptKind::Implicit, ""});
                break;
            default:
                edit = core::make_replace_edit({labels[rng.below(5)],
                                                core::ConceptKind::Explicit, ""},
                                               {labels[rng.below(5)],
                                                core::ConceptKind::Implicit, "why"});
        }
        core::Prompt child = core::make_child_prompt(
            root, root.id + "c", root.text + " changed " + std::to_string(i), edit);
        core::AceRecord r;
        r.prompt_before = root;
        r.edit = edit;
        r.prompt_after = child;
        r.seed = static_cast<long>(rng.below(100));
        r.task_id = "t";
        if (rng.below(5) == 0) {
            r.error = "mutation_constraint";
        } else {
            r.model_output = "output " + std::to_string(rng.below(50));
            r.score = static_cast<int>(rng.below(2));
        }
        std::string line1 = record_to_line(r);
        std::string line2 = record_to_line(record_from_line(line1));
        CHECK(line1 == line2);
    }
}

TEST_CASE("full mock pipeline: rollout, split, evolve, eval, report") {
    auto dir = fresh_dir("pipeline");
    write_prompts(dir / "prompts.txt", 24);
    write_prompts(dir / "heldout.txt", 10);
    Config config = parse_config(base_config_json(dir));
    std::string run = (dir / "run").string();

    cmd_rollout(config, "wordcount", 1, "none", run);
    CHECK(fs::exists(run + "/records.jsonl"));
    CHECK(fs::exists(run + "/trees.jsonl"));
    CHECK(fs::exists(run + "/summary.json"));
    auto records = read_records(run + "/records.jsonl");
    CHECK(!records.empty());
    long valid = 0;
    for (const auto& r : records)
        if (!r.error) ++valid;
    CHECK(valid > 0);

    cmd_split(config, run, 5, {0.5, 0.25, 0.25});
    CHECK(fs::exists(run + "/splits/train.jsonl"));
    auto train = read_examples(run + "/splits/train.jsonl");
    auto val = read_examples(run + "/splits/val.jsonl");
    auto test = read_examples(run + "/splits/test.jsonl");
    CHECK(!train.empty());
    CHECK(!val.empty());
    CHECK(!test.empty());

    cmd_evolve(config, "wordcount", run, {});
    CHECK(fs::exists(run + "/constitution.txt"));
    CHECK(fs::exists(run + "/epochs.jsonl"));

    cmd_eval(config, "wordcount", run + "/constitution.txt", (dir / "heldout.txt").string(),
             run);
    CHECK(fs::exists(run + "/eval/metrics.jsonl"));
    CHECK(fs::exists(run + "/eval/curves.jsonl"));
    auto row = report_row_from_json(
        nlohmann::json::parse(read_lines(run + "/eval/metrics.jsonl")[0]));
    REQUIRE(row.ace_rate_mean.has_value());
    REQUIRE(row.cace_rate_mean.has_value());
    // the constitution token raises per-step success sharply in this world
    CHECK(*row.cace_rate_mean > *row.ace_rate_mean);
    REQUIRE(row.selfbleu_starter.has_value());
    REQUIRE(row.selfbleu_cace_mean.has_value());

    std::string report_dir = (dir / "report").string();
    cmd_report({run}, report_dir);
    CHECK(fs::exists(report_dir + "/table.txt"));
    CHECK(fs::exists(report_dir + "/report.jsonl"));
    CHECK(fs::exists(report_dir + "/curves.svg"));
    auto table = read_lines(report_dir + "/table.txt");
    REQUIRE(table.size() >= 3);
    CHECK(table[0].find("surr.init") != std::string::npos);

    // two run dirs merge side by side on (task, model) keys
    std::string run_b = (dir / "runb").string();
    fs::create_directories(run_b);
    fs::copy(run, run_b, fs::copy_options::recursive | fs::copy_options::skip_existing);
    std::string merged_dir = (dir / "merged").string();
    cmd_report({run, run_b}, merged_dir);
    std::string merged;
    for (const auto& line : read_lines(merged_dir + "/table.txt")) merged += line + "\n";
    std::size_t row_a = merged.find("run ");
    std::size_t row_b = merged.find("runb");
    CHECK(row_a != std::string::npos);
    CHECK(row_b != std::string::npos);
    auto merged_rows = read_lines(merged_dir + "/report.jsonl");
    CHECK(merged_rows.size() == 2);

    fs::remove_all(dir);
}

TEST_CASE("missing prompt file fails cleanly; lock blocks concurrent writers") {
    auto dir = fresh_dir("errors");
    auto j = base_config_json(dir);
    Config config = parse_config(j); // prompts file not written yet
    CHECK_THROWS_AS(cmd_rollout(config, "wordcount", 1, "none", (dir / "out").string()),
                    IoError);

    write_prompts(dir / "prompts.txt", 2);
    std::string out = (dir / "locked").string();
    fs::create_directories(out);
    std::ofstream(out + "/.lock") << "held";
    CHECK_THROWS_AS(cmd_rollout(config, "wordcount", 1, "none", out), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("unknown task and unreadable constitution are user errors") {
    auto dir = fresh_dir("usererr");
    write_prompts(dir / "prompts.txt", 2);
    Config config = parse_config(base_config_json(dir));
    CHECK_THROWS_AS(cmd_rollout(config, "nope", 1, "none", (dir / "o").string()),
                    ConfigError);
    CHECK_THROWS_AS(
        cmd_eval(config, "wordcount", (dir / "missing.txt").string(),
                 (dir / "prompts.txt").string(), (dir / "o2").string()),
        IoError);
    fs::remove_all(dir);
}

TEST_CASE("exported template files match the built-ins") {
    auto dir = fresh_dir("templates");
    cmd_export_templates(dir.string());
    mutate::TemplateSet defaults = mutate::TemplateSet::defaults();
    mutate::TemplateSet loaded = mutate::TemplateSet::load(dir.string());
    for (const auto& name : mutate::TemplateSet::names())
        CHECK(loaded.get(name) == defaults.get(name));
    fs::remove_all(dir);
}

TEST_CASE("shipped configs load with their documented schedules") {
    std::string root(ACE_SOURCE_DIR);
    Config wc = load_config(root + "/configs/wordcount-mock.json");
    CHECK(wc.schedule.epochs == 5);
    CHECK(wc.schedule.batch_size == 100);
    CHECK(wc.schedule.size_start == 10);
    CHECK(wc.schedule.size_end == 10);
    CHECK(wc.schedule.change_pct_start == doctest::Approx(10.0));
    CHECK(wc.rollout.branching == 2);
    CHECK(wc.rollout.max_depth == 3);
    CHECK(wc.rollout.seeds.size() == 10);
    CHECK(wc.autoraters.at("wc").word_limit == 50);
    // the limit stays autorater-private: never in the task description
    CHECK(wc.tasks.at("wordcount").description.find("50") == std::string::npos);

    Config math = load_config(root + "/configs/math-mock.json");
    CHECK(math.schedule.epochs == 10);
    CHECK(math.schedule.batch_size == 200);
    CHECK(math.schedule.size_start == 5);
    CHECK(math.schedule.size_end == 10);
    CHECK(math.schedule.change_pct_start == doctest::Approx(100.0));
    CHECK(math.schedule.change_pct_end == doctest::Approx(5.0));

    Config t2i = load_config(root + "/configs/t2i-mock.json");
    CHECK(t2i.rollout.max_depth == 4);
    CHECK(t2i.schedule.epochs == 20);
    CHECK(t2i.schedule.batch_size == 50);
    CHECK(t2i.autoraters.at("judge").k == 3);
}

TEST_CASE("repository templates directory stays in sync with the built-ins") {
    std::string repo_templates = std::string(ACE_SOURCE_DIR) + "/templates";
    REQUIRE(fs::exists(repo_templates));
    mutate::TemplateSet defaults = mutate::TemplateSet::defaults();
    mutate::TemplateSet loaded = mutate::TemplateSet::load(repo_templates);
    for (const auto& name : mutate::TemplateSet::names()) {
        INFO("template: ", name);
        CHECK(fs::exists(repo_templates + "/" + name + ".txt"));
        CHECK(loaded.get(name) == defaults.get(name));
    }
}
