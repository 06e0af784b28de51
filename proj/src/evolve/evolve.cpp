#include "ace/evolve/evolve.hpp"

#include <algorithm>
#include <set>

#include "ace/evolve/constitution_io.hpp"
#include "ace/util/parallel.hpp"
#include "ace/util/rng.hpp"
#include "ace/util/strings.hpp"

namespace ace::evolve {

using core::Constitution;
using core::TaskSpec;

int title_changes(const Constitution& parent, const Constitution& child) {
    std::set<std::string> parent_titles, child_titles;
    for (const auto& s : parent.strategies) parent_titles.insert(util::to_lower(s.title));
    for (const auto& s : child.strategies) child_titles.insert(util::to_lower(s.title));
    int added = 0, removed = 0;
    for (const auto& t : child_titles)
        if (!parent_titles.count(t)) ++added;
    for (const auto& t : parent_titles)
        if (!child_titles.count(t)) ++removed;
    return std::max(added, removed);
}

Evolver::Evolver(gateway::Gateway& gw, mutate::TemplateSet templates, EvolveConfig config)
    : gw_(gw), templates_(std::move(templates)), config_(std::move(config)) {}

Constitution Evolver::parse_constitution_reply(const std::string& reply,
                                               int expected_size) const {
    Constitution c = parse_constitution_text(reply);
    if (static_cast<int>(c.strategies.size()) != expected_size)
        throw ConstitutionParseError("expected " + std::to_string(expected_size) +
                                     " strategies, got " +
                                     std::to_string(c.strategies.size()));
    return c;
}

Constitution Evolver::init_constitution(const std::vector<LabeledExample>& train,
                                        const TaskSpec& task, int k0,
                                        int sample_cap) const {
    if (train.empty()) throw PreconditionError("init_constitution needs train examples");
    if (k0 < 1) throw PreconditionError("initial constitution size must be >= 1");

    std::string examples;
    int shown = 0;
    for (const auto& ex : train) {
        if (shown++ >= sample_cap) break;
        examples += "EXAMPLE: " + ex.edit_verbalization + " | label=" +
                    std::to_string(ex.true_label) + " | before=" +
                    util::truncate(ex.before_text, config_.snippet_chars) + " | after=" +
                    util::truncate(ex.after_text, config_.snippet_chars) + "\n";
    }

    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        gateway::LlmRequest req;
        req.model_id = config_.model_id;
        req.system_instruction = templates_.system_instruction(task.description);
        req.temperature = config_.optimizer_temperature;
        req.max_output_tokens = config_.max_output_tokens;
        req.request_tag = "constitution_init#" + std::to_string(attempt);
        req.user_message = templates_.render(
            "constitution_init", {{"task_description", task.description},
                                  {"target_size", std::to_string(k0)},
                                  {"examples", examples}});
        try {
            Constitution c = parse_constitution_reply(gw_.complete(req).text, k0);
            c.generation = 0;
            c.lineage_note = "initial constitution from " + std::to_string(shown) +
                             " train examples";
            return c;
        } catch (const ConstitutionParseError& e) {
            last_error = e.what();
        }
    }
    throw ConstitutionParseError("initial constitution failed after retries: " + last_error);
}

int Evolver::surrogate_classify(const Constitution& constitution, const TaskSpec& task,
                                const LabeledExample& example) const {
    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        gateway::LlmRequest req;
        req.model_id = config_.model_id;
        req.system_instruction = templates_.system_instruction(task.description);
        req.temperature = config_.surrogate_temperature;
        req.max_output_tokens = config_.max_output_tokens;
        req.request_tag = "surrogate#" + std::to_string(attempt);
        req.user_message = templates_.render(
            "surrogate", {{"constitution", constitution_to_text(constitution)},
                          {"before", example.before_text},
                          {"edit", example.edit_verbalization},
                          {"after", example.after_text}});
        std::string reply = gw_.complete(req).text;

        // the reply must END with a parseable label line
        auto lines = util::split(reply, '\n');
        for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
            std::string line = util::trim(*it);
            if (line.empty()) continue;
            std::size_t pos = util::ifind(line, "label:");
            if (pos != std::string::npos) {
                std::string rest = util::trim(line.substr(pos + 6));
                if (!rest.empty() && (rest[0] == '0' || rest[0] == '1')) return rest[0] - '0';
            }
            break;
        }
        last_error = "no trailing LABEL line in: " + util::truncate(reply, 120);
    }
    throw SurrogateParseError(last_error);
}

EvalResult Evolver::evaluate_accuracy(const Constitution& constitution, const TaskSpec& task,
                                      const std::vector<LabeledExample>& split) const {
    if (split.empty()) throw PreconditionError("evaluate_accuracy needs examples");

    auto predictions = util::parallel_map<int>(
        split.size(), static_cast<std::size_t>(config_.eval_workers), [&](std::size_t i) {
            try {
                return surrogate_classify(constitution, task, split[i]);
            } catch (const Error&) {
                return -1;
            }
        });

    EvalResult result;
    result.predictions = std::move(predictions);
    long correct = 0, rated = 0;
    for (std::size_t i = 0; i < split.size(); ++i) {
        if (result.predictions[i] < 0) {
            ++result.errored;
            continue;
        }
        ++rated;
        if (result.predictions[i] == split[i].true_label) ++correct;
        else result.misclassified.push_back(static_cast<int>(i));
    }
    if (result.errored > config_.max_error_fraction * static_cast<double>(split.size()))
        throw EvaluationError(std::to_string(result.errored) + " of " +
                              std::to_string(split.size()) + " surrogate calls failed");
    result.accuracy = rated == 0 ? 0.0 : static_cast<double>(correct) / rated;
    return result;
}

Constitution Evolver::update_constitution(const Constitution& incumbent, const TaskSpec& task,
                                          const std::vector<LabeledExample>& batch,
                                          const std::vector<int>& batch_predictions,
                                          int target_size, double change_pct) const {
    if (batch.empty()) throw PreconditionError("update_constitution needs a batch");
    if (batch.size() != batch_predictions.size())
        throw PreconditionError("batch and predictions length mismatch");

    const int k = static_cast<int>(incumbent.strategies.size());
    const int bound = EvolutionSchedule::max_title_changes(change_pct, k);

    std::string feedback;
    int shown_bad = 0, shown_good = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        bool miss = batch_predictions[i] != batch[i].true_label;
        if (miss && shown_bad >= config_.feedback_misclassified_cap) continue;
        if (!miss && shown_good >= config_.feedback_correct_cap) continue;
        (miss ? shown_bad : shown_good)++;
        feedback += std::string(miss ? "MISCLASSIFIED" : "CORRECT") + ": edit=" +
                    batch[i].edit_verbalization + " | true=" +
                    std::to_string(batch[i].true_label) + " | predicted=" +
                    (batch_predictions[i] < 0 ? std::string("error")
                                              : std::to_string(batch_predictions[i])) +
                    " | before=" + util::truncate(batch[i].before_text, config_.snippet_chars) +
                    " | after=" + util::truncate(batch[i].after_text, config_.snippet_chars) +
                    "\n";
    }

    std::string last_error;
    for (int attempt = 0; attempt < 3; ++attempt) {
        gateway::LlmRequest req;
        req.model_id = config_.model_id;
        req.system_instruction = templates_.system_instruction(task.description);
        req.temperature = config_.optimizer_temperature;
        req.max_output_tokens = config_.max_output_tokens;
        req.request_tag = "constitution_update#" + std::to_string(attempt);
        req.user_message = templates_.render(
            "constitution_update", {{"task_description", task.description},
                                    {"constitution", constitution_to_text(incumbent)},
                                    {"feedback", feedback},
                                    {"target_size", std::to_string(target_size)},
                                    {"max_changes", std::to_string(bound)}});
        try {
            Constitution c = parse_constitution_reply(gw_.complete(req).text, target_size);
            int changes = title_changes(incumbent, c);
            if (changes > bound)
                throw ConstitutionParseError("update rewrote " + std::to_string(changes) +
                                             " titles, cap is " + std::to_string(bound));
            c.generation = incumbent.generation + 1;
            return c;
        } catch (const ConstitutionParseError& e) {
            last_error = e.what();
        }
    }
    throw ConstitutionParseError("constitution update failed after retries: " + last_error);
}

std::pair<Constitution, std::vector<EpochReport>> Evolver::run_evolution(
    const SplitDataset& dataset, const TaskSpec& task,
    const EvolutionSchedule& schedule) const {
    schedule.validate();
    if (dataset.train.empty() || dataset.val.empty() || dataset.test.empty())
        throw PreconditionError("run_evolution needs non-empty train/val/test splits");

    struct Candidate {
        Constitution constitution;
        int title_changes = 0;
        int change_bound = 0;
        bool is_incumbent = false;
    };
    std::vector<Candidate> candidates;
    candidates.push_back(
        {init_constitution(dataset.train, task, schedule.size_at(0), schedule.batch_size),
         0, 0, true});

    std::vector<EpochReport> reports;
    Constitution best = candidates.front().constitution;

    for (int epoch = 1; epoch <= schedule.epochs; ++epoch) {
        EpochReport report;
        report.epoch = epoch;

        // score every candidate on the validation split
        std::vector<EvalResult> val_results;
        val_results.reserve(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            val_results.push_back(
                evaluate_accuracy(candidates[i].constitution, task, dataset.val));
            report.candidates.push_back(
                {static_cast<int>(i), val_results.back().accuracy,
                 static_cast<int>(candidates[i].constitution.strategies.size()),
                 candidates[i].title_changes, candidates[i].change_bound,
                 candidates[i].is_incumbent});
        }
        int best_index = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (val_results[i].accuracy > val_results[best_index].accuracy)
                best_index = static_cast<int>(i); // ties keep the lowest index
        best = candidates[best_index].constitution;
        report.best_index = best_index;
        report.best_val_accuracy = val_results[best_index].accuracy;
        report.misclassified_val_indices = val_results[best_index].misclassified;

        EvalResult train_result = evaluate_accuracy(best, task, dataset.train);
        EvalResult test_result = evaluate_accuracy(best, task, dataset.test);
        report.train_accuracy = train_result.accuracy;
        report.test_accuracy = test_result.accuracy; // reporting only
        reports.push_back(report);

        // shuffle train with a per-epoch seed and spawn one candidate per batch
        std::vector<std::size_t> order(dataset.train.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        util::SeededRng rng(util::combine_seed(static_cast<std::uint64_t>(dataset.seed),
                                               static_cast<std::uint64_t>(epoch)));
        rng.shuffle(order);

        const int target_size = schedule.size_at(epoch);
        const double change_pct = schedule.change_pct_at(epoch);
        const int bound = EvolutionSchedule::max_title_changes(
            change_pct, static_cast<int>(best.strategies.size()));

        std::vector<Candidate> next;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(schedule.batch_size)) {
            std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(schedule.batch_size));
            std::vector<LabeledExample> batch;
            std::vector<int> preds;
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(dataset.train[order[i]]);
                preds.push_back(train_result.predictions[order[i]]);
            }
            try {
                Constitution child =
                    update_constitution(best, task, batch, preds, target_size, change_pct);
                child.lineage_note = "epoch " + std::to_string(epoch) + " batch " +
                                     std::to_string(start / schedule.batch_size);
                next.push_back({std::move(child), 0, 0, false});
                next.back().title_changes = title_changes(best, next.back().constitution);
                next.back().change_bound = bound;
            } catch (const Error&) {
                // failed update: candidate dropped, incumbent still present
            }
        }
        // incumbent retention (documented deviation from the bare algorithm):
        // appended last so exact ties favor the fresh candidates
        next.push_back({best, 0, 0, true});
        candidates = std::move(next);
    }

    return {best, reports};
}

} // namespace ace::evolve
