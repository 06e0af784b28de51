#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ace/core/types.hpp"
#include "ace/evolve/dataset.hpp"
#include "ace/evolve/schedule.hpp"
#include "ace/gateway/gateway.hpp"
#include "ace/mutate/templates.hpp"

namespace ace::evolve {

struct EvolveConfig {
    std::string model_id;              // surrogate + optimizer LLM
    double surrogate_temperature = 0.0;
    double optimizer_temperature = 0.7;
    int feedback_misclassified_cap = 20;
    int feedback_correct_cap = 10;
    int snippet_chars = 300;
    int eval_workers = 8;
    double max_error_fraction = 0.2;   // evaluate_accuracy aborts above this
    int max_output_tokens = 2048;
};

struct CandidateEval {
    int candidate_index = 0;
    double val_accuracy = 0.0;
    int size = 0;           // strategy count, for schedule audits
    int title_changes = 0;  // vs the incumbent that spawned it
    int change_bound = 0;   // ceil(change_pct x K) in force when it was created
    bool is_incumbent = false;
};

struct EpochReport {
    int epoch = 0;
    std::vector<CandidateEval> candidates;
    int best_index = 0;
    double best_val_accuracy = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::vector<int> misclassified_val_indices; // of the selected candidate
};

// max(|titles added|, |titles removed|), case-insensitive.
int title_changes(const core::Constitution& parent, const core::Constitution& child);

struct EvalResult {
    double accuracy = 0.0;
    std::vector<int> predictions;   // -1 where the call errored
    std::vector<int> misclassified; // example indices
    int errored = 0;
};

class Evolver {
public:
    Evolver(gateway::Gateway& gw, mutate::TemplateSet templates, EvolveConfig config);

    // One LLM call over a train sample (capped at sample_cap) producing
    // exactly k0 strategies; two reparse retries, then ConstitutionParseError.
    core::Constitution init_constitution(const std::vector<LabeledExample>& train,
                                         const core::TaskSpec& task, int k0,
                                         int sample_cap) const;

    // Template S: predicts the autorater score for one example.
    int surrogate_classify(const core::Constitution& constitution,
                           const core::TaskSpec& task, const LabeledExample& example) const;

    // Mean agreement with true labels over the split; per-example failures
    // are tolerated up to max_error_fraction, then EvaluationError.
    EvalResult evaluate_accuracy(const core::Constitution& constitution,
                                 const core::TaskSpec& task,
                                 const std::vector<LabeledExample>& split) const;

    // One optimizer call: presents the batch with true labels and the
    // incumbent's predictions (misclassifications highlighted as the loss),
    // enforcing the size target and the title-change cap on the output.
    core::Constitution update_constitution(const core::Constitution& incumbent,
                                           const core::TaskSpec& task,
                                           const std::vector<LabeledExample>& batch,
                                           const std::vector<int>& batch_predictions,
                                           int target_size, double change_pct) const;

    // The full evolutionary loop: per epoch score all candidates on val,
    // select the argmax (ties toward the lowest index), record train/test
    // accuracy, then spawn one candidate per train batch. The incumbent is
    // retained at the END of the candidate list: selection can never regress
    // on the same split, while exact ties go to the fresh, schedule-sized
    // candidates. Failed updates are dropped; the incumbent always survives.
    std::pair<core::Constitution, std::vector<EpochReport>> run_evolution(
        const SplitDataset& dataset, const core::TaskSpec& task,
        const EvolutionSchedule& schedule) const;

private:
    core::Constitution parse_constitution_reply(const std::string& reply,
                                                int expected_size) const;

    gateway::Gateway& gw_;
    mutate::TemplateSet templates_;
    EvolveConfig config_;
};

} // namespace ace::evolve
