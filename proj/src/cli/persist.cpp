#include "ace/cli/persist.hpp"

#include <fstream>

#include "ace/util/strings.hpp"

namespace ace::cli {

using nlohmann::json;

namespace {

std::string concept_kind_to(core::ConceptKind k) {
    return k == core::ConceptKind::Explicit ? "explicit" : "implicit";
}

core::ConceptKind concept_kind_from(const std::string& s) {
    if (s == "explicit") return core::ConceptKind::Explicit;
    if (s == "implicit") return core::ConceptKind::Implicit;
    throw IoError("unknown concept kind: " + s);
}

std::string edit_kind_to(core::EditKind k) {
    switch (k) {
        case core::EditKind::Add: return "add";
        case core::EditKind::Remove: return "remove";
        case core::EditKind::Replace: return "replace";
    }
    return "add";
}

core::EditKind edit_kind_from(const std::string& s) {
    if (s == "add") return core::EditKind::Add;
    if (s == "remove") return core::EditKind::Remove;
    if (s == "replace") return core::EditKind::Replace;
    throw IoError("unknown edit kind: " + s);
}

json to_json(const core::Concept& c) {
    return json{{"label", c.label}, {"kind", concept_kind_to(c.kind)}, {"note", c.note}};
}

core::Concept concept_from_json(const json& j) {
    return {j.at("label").get<std::string>(),
            concept_kind_from(j.at("kind").get<std::string>()),
            j.value("note", std::string())};
}

} // namespace

json to_json(const core::AtomicConceptEdit& e) {
    json j{{"kind", edit_kind_to(e.kind)},
           {"concept", to_json(e.subject)},
           {"verbalization", e.verbalization}};
    if (e.replacement) j["replacement"] = to_json(*e.replacement);
    return j;
}

core::AtomicConceptEdit edit_from_json(const json& j) {
    core::AtomicConceptEdit e;
    e.kind = edit_kind_from(j.at("kind").get<std::string>());
    e.subject = concept_from_json(j.at("concept"));
    if (j.contains("replacement")) e.replacement = concept_from_json(j.at("replacement"));
    e.verbalization = j.at("verbalization").get<std::string>();
    return e;
}

json to_json(const core::Prompt& p) {
    json j{{"id", p.id}, {"text", p.text}, {"depth", p.depth}};
    if (p.parent_id) j["parent_id"] = *p.parent_id;
    if (p.applied_edit) j["applied_edit"] = to_json(*p.applied_edit);
    return j;
}

core::Prompt prompt_from_json(const json& j) {
    core::Prompt p;
    p.id = j.at("id").get<std::string>();
    p.text = j.at("text").get<std::string>();
    p.depth = j.at("depth").get<int>();
    if (j.contains("parent_id")) p.parent_id = j.at("parent_id").get<std::string>();
    if (j.contains("applied_edit")) p.applied_edit = edit_from_json(j.at("applied_edit"));
    return p;
}

json to_json(const core::AceRecord& r) {
    json j{{"task_id", r.task_id},
           {"seed", r.seed},
           {"prompt_before", to_json(r.prompt_before)},
           {"edit", to_json(r.edit)},
           {"prompt_after", to_json(r.prompt_after)},
           {"model_output", r.model_output}};
    if (r.score) j["score"] = *r.score;
    if (r.error) j["error"] = *r.error;
    return j;
}

core::AceRecord record_from_json(const json& j) {
    core::AceRecord r;
    r.task_id = j.at("task_id").get<std::string>();
    r.seed = j.at("seed").get<long>();
    r.prompt_before = prompt_from_json(j.at("prompt_before"));
    r.edit = edit_from_json(j.at("edit"));
    r.prompt_after = prompt_from_json(j.at("prompt_after"));
    r.model_output = j.at("model_output").get<std::string>();
    if (j.contains("score")) r.score = j.at("score").get<int>();
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    return r;
}

json to_json(const evolve::LabeledExample& e) {
    return json{{"before_text", e.before_text},
                {"edit_verbalization", e.edit_verbalization},
                {"after_text", e.after_text},
                {"true_label", e.true_label}};
}

evolve::LabeledExample example_from_json(const json& j) {
    return {j.at("before_text").get<std::string>(),
            j.at("edit_verbalization").get<std::string>(),
            j.at("after_text").get<std::string>(), j.at("true_label").get<int>()};
}

json to_json(const evolve::EpochReport& r) {
    json candidates = json::array();
    for (const auto& c : r.candidates)
        candidates.push_back({{"index", c.candidate_index},
                              {"val_accuracy", c.val_accuracy},
                              {"size", c.size},
                              {"title_changes", c.title_changes},
                              {"change_bound", c.change_bound},
                              {"is_incumbent", c.is_incumbent}});
    return json{{"epoch", r.epoch},
                {"candidates", candidates},
                {"best_index", r.best_index},
                {"best_val_accuracy", r.best_val_accuracy},
                {"train_accuracy", r.train_accuracy},
                {"test_accuracy", r.test_accuracy},
                {"misclassified_val_indices", r.misclassified_val_indices}};
}

evolve::EpochReport epoch_report_from_json(const json& j) {
    evolve::EpochReport r;
    r.epoch = j.at("epoch").get<int>();
    for (const auto& c : j.at("candidates"))
        r.candidates.push_back({c.at("index").get<int>(), c.at("val_accuracy").get<double>(),
                                c.value("size", 0), c.at("title_changes").get<int>(),
                                c.at("change_bound").get<int>(),
                                c.value("is_incumbent", false)});
    r.best_index = j.at("best_index").get<int>();
    r.best_val_accuracy = j.at("best_val_accuracy").get<double>();
    r.train_accuracy = j.at("train_accuracy").get<double>();
    r.test_accuracy = j.at("test_accuracy").get<double>();
    r.misclassified_val_indices =
        j.at("misclassified_val_indices").get<std::vector<int>>();
    return r;
}

json to_json(const metrics::ReportRow& r) {
    json j{{"run_label", r.run_label}, {"task_id", r.task_id}, {"model_id", r.model_id}};
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("surrogate_initial", r.surrogate_initial);
    put("surrogate_final", r.surrogate_final);
    put("ace_rate_mean", r.ace_rate_mean);
    put("ace_rate_std", r.ace_rate_std);
    put("cace_rate_mean", r.cace_rate_mean);
    put("cace_rate_std", r.cace_rate_std);
    put("selfbleu_starter", r.selfbleu_starter);
    put("selfbleu_ace_mean", r.selfbleu_ace_mean);
    put("selfbleu_ace_std", r.selfbleu_ace_std);
    put("selfbleu_cace_mean", r.selfbleu_cace_mean);
    put("selfbleu_cace_std", r.selfbleu_cace_std);
    return j;
}

metrics::ReportRow report_row_from_json(const json& j) {
    metrics::ReportRow r;
    r.run_label = j.value("run_label", std::string());
    r.task_id = j.value("task_id", std::string());
    r.model_id = j.value("model_id", std::string());
    auto get = [&](const char* key) -> std::optional<double> {
        if (j.contains(key)) return j.at(key).get<double>();
        return std::nullopt;
    };
    r.surrogate_initial = get("surrogate_initial");
    r.surrogate_final = get("surrogate_final");
    r.ace_rate_mean = get("ace_rate_mean");
    r.ace_rate_std = get("ace_rate_std");
    r.cace_rate_mean = get("cace_rate_mean");
    r.cace_rate_std = get("cace_rate_std");
    r.selfbleu_starter = get("selfbleu_starter");
    r.selfbleu_ace_mean = get("selfbleu_ace_mean");
    r.selfbleu_ace_std = get("selfbleu_ace_std");
    r.selfbleu_cace_mean = get("selfbleu_cace_mean");
    r.selfbleu_cace_std = get("selfbleu_cace_std");
    return r;
}

json tree_manifest_json(const rollout::RolloutTree& tree) {
    json terminal = json::object();
    for (const auto& [id, status] : tree.terminal)
        terminal[id] = rollout::to_string(status);
    return json{{"root_id", tree.root.id},
                {"root_text", tree.root.text},
                {"max_depth", tree.max_depth},
                {"node_count", tree.nodes.size()},
                {"terminal", terminal}};
}

std::string record_to_line(const core::AceRecord& r) { return to_json(r).dump(); }

core::AceRecord record_from_line(const std::string& line) {
    return record_from_json(json::parse(line));
}

void write_lines(const std::vector<std::string>& lines, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write file: " + path);
    for (const auto& line : lines) out << line << "\n";
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

void write_records(const std::vector<core::AceRecord>& records, const std::string& path) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const auto& r : records) lines.push_back(record_to_line(r));
    write_lines(lines, path);
}

std::vector<core::AceRecord> read_records(const std::string& path) {
    std::vector<core::AceRecord> out;
    for (const auto& line : read_lines(path)) {
        if (util::trim(line).empty()) continue;
        out.push_back(record_from_line(line));
    }
    return out;
}

void write_examples(const std::vector<evolve::LabeledExample>& examples,
                    const std::string& path) {
    std::vector<std::string> lines;
    lines.reserve(examples.size());
    for (const auto& e : examples) lines.push_back(to_json(e).dump());
    write_lines(lines, path);
}

std::vector<evolve::LabeledExample> read_examples(const std::string& path) {
    std::vector<evolve::LabeledExample> out;
    for (const auto& line : read_lines(path)) {
        if (util::trim(line).empty()) continue;
        out.push_back(example_from_json(json::parse(line)));
    }
    return out;
}

std::vector<std::string> read_prompt_file(const std::string& path) {
    std::vector<std::string> prompts;
    for (const auto& line : read_lines(path)) {
        std::string t = util::trim(line);
        if (!t.empty()) prompts.push_back(t);
    }
    return prompts;
}

} // namespace ace::cli
