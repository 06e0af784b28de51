#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ace/core/types.hpp"
#include "ace/evolve/dataset.hpp"
#include "ace/evolve/evolve.hpp"
#include "ace/metrics/report.hpp"
#include "ace/rollout/rollout.hpp"

namespace ace::cli {

// Line-delimited persistence: one self-describing JSON record per line,
// emitted with sorted keys so identical inputs serialize byte-identically.

nlohmann::json to_json(const core::Prompt& p);
core::Prompt prompt_from_json(const nlohmann::json& j);

nlohmann::json to_json(const core::AtomicConceptEdit& e);
core::AtomicConceptEdit edit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const core::AceRecord& r);
core::AceRecord record_from_json(const nlohmann::json& j);

nlohmann::json to_json(const evolve::LabeledExample& e);
evolve::LabeledExample example_from_json(const nlohmann::json& j);

nlohmann::json to_json(const evolve::EpochReport& r);
evolve::EpochReport epoch_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const metrics::ReportRow& r);
metrics::ReportRow report_row_from_json(const nlohmann::json& j);

nlohmann::json tree_manifest_json(const rollout::RolloutTree& tree);

std::string record_to_line(const core::AceRecord& r);
core::AceRecord record_from_line(const std::string& line);

void write_records(const std::vector<core::AceRecord>& records, const std::string& path);
std::vector<core::AceRecord> read_records(const std::string& path);

void write_examples(const std::vector<evolve::LabeledExample>& examples,
                    const std::string& path);
std::vector<evolve::LabeledExample> read_examples(const std::string& path);

void write_lines(const std::vector<std::string>& lines, const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

// One prompt per line; blank lines skipped.
std::vector<std::string> read_prompt_file(const std::string& path);

} // namespace ace::cli
