#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ace/cli/config.hpp"

namespace ace::cli {

struct ScheduleOverride {
    std::optional<int> epochs, batch_size, size_start, size_end;
    std::optional<double> change_pct_start, change_pct_end;
};

// The five pipeline commands. All throw ace::Error on failure; the binary
// maps user errors to exit 1 and internal errors to exit 2. Each command
// takes a lock file in its output directory, so two commands never write the
// same run concurrently.

// Rollouts for every initial prompt of the task; writes records.jsonl,
// trees.jsonl, summary.json and the request log under out_dir.
void cmd_rollout(const Config& config, const std::string& task_id, long seed,
                 const std::string& constitution_path, const std::string& out_dir);

// Lineage-disjoint, label-balanced splits from <run>/records.jsonl into
// <run>/splits/.
void cmd_split(const Config& config, const std::string& dataset_dir, long seed,
               const std::array<double, 3>& ratios);

// Constitution evolution over <run>/splits/; writes constitution.txt and
// epochs.jsonl.
void cmd_evolve(const Config& config, const std::string& task_id, const std::string& run_dir,
                const ScheduleOverride& overrides);

// Guided-vs-unguided rollouts on held-out prompts across the configured
// seeds; writes eval/metrics.jsonl and eval/curves.jsonl.
void cmd_eval(const Config& config, const std::string& task_id,
              const std::string& constitution_path, const std::string& prompts_file,
              const std::string& out_dir);

// Merges one or more run directories into a text table (also printed),
// report.jsonl, and an SVG of the cumulative success curves.
void cmd_report(const std::vector<std::string>& run_dirs, const std::string& out_dir);

// Writes the built-in prompt templates as editable files.
void cmd_export_templates(const std::string& out_dir);

} // namespace ace::cli
