#include "ace/rollout/rollout.hpp"

#include <algorithm>
#include <cmath>

#include "ace/csp/solve.hpp"
#include "ace/util/parallel.hpp"
#include "ace/util/rng.hpp"

namespace ace::rollout {

using core::AceRecord;
using core::Prompt;

std::string to_string(LeafStatus status) {
    switch (status) {
        case LeafStatus::Success: return "success";
        case LeafStatus::DepthExhausted: return "depth_exhausted";
        case LeafStatus::Error: return "error";
    }
    return "error";
}

LeafStatus leaf_status_from_string(const std::string& s) {
    if (s == "success") return LeafStatus::Success;
    if (s == "depth_exhausted") return LeafStatus::DepthExhausted;
    if (s == "error") return LeafStatus::Error;
    throw InvariantViolation("unknown leaf status: " + s);
}

std::vector<std::string> RolloutTree::children_of(const std::string& prompt_id) const {
    std::vector<std::string> out;
    for (const auto& [id, record] : nodes)
        if (record.prompt_before.id == prompt_id) out.push_back(id);
    return out;
}

std::vector<std::string> RolloutTree::leaves() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : nodes)
        if (children_of(id).empty()) out.push_back(id);
    if (out.empty()) out.push_back(root.id);
    return out;
}

namespace {

struct ChildOutcome {
    AceRecord record;
    bool expandable = false; // valid, unsuccessful, below the depth cap
};

// Makes the record for one applied edit: apply, validate (math), query the
// target model, rate. Failures come back as error-tagged records with a
// best-effort prompt_after so lineage stays intact.
AceRecord make_child_record(const Prompt& parent, const mutate::EditProposal& proposal,
                            const core::TaskSpec& task, const RolloutConfig& config,
                            long seed, const std::string& child_id,
                            mutate::Mutator& mutator, gateway::Gateway& gw,
                            autorate::Autorater& autorater) {
    AceRecord record;
    record.prompt_before = parent;
    record.edit = proposal.edit;
    record.seed = seed;
    record.task_id = task.task_id;

    auto fail = [&](const std::string& tag) {
        Prompt placeholder;
        placeholder.id = child_id;
        placeholder.text = parent.text;
        placeholder.parent_id = parent.id;
        placeholder.depth = parent.depth + 1;
        placeholder.applied_edit = proposal.edit;
        record.prompt_after = placeholder;
        record.error = tag;
        return record;
    };

    Prompt child;
    try {
        child = mutator.apply_edit(parent, proposal.edit, task, child_id);
    } catch (const Error& e) {
        return fail(e.tag());
    }

    // Math validity filter: run the mutated problem through the solver; one
    // Correct call may recycle an unparseable problem, otherwise drop.
    if (autorater.config().kind == autorate::AutoraterKind::MathCsp) {
        std::string error;
        if (!csp::is_valid_csp(child.text, &error)) {
            try {
                std::string repaired = mutator.math_correct(child.text, error, task);
                if (!csp::is_valid_csp(repaired, &error))
                    return fail("unparseable_after_correct");
                child.text = repaired;
            } catch (const Error&) {
                return fail("unparseable_after_correct");
            }
        }
    }

    std::string model_output;
    try {
        if (autorater.consumes_output_reference()) {
            model_output = "outputs:" + child.id;
        } else if (autorater.config().kind == autorate::AutoraterKind::JudgeWorstOfK) {
            // k target samples, one per judged output slot
            for (int i = 0; i < autorater.config().k; ++i) {
                gateway::LlmRequest req;
                req.model_id = task.target_model_id;
                req.user_message = child.text;
                req.temperature = config.target_temperature;
                req.request_tag = "target#" + std::to_string(i);
                if (i) model_output += '\x1e';
                model_output += gw.complete(req).text;
            }
        } else {
            gateway::LlmRequest req;
            req.model_id = task.target_model_id;
            req.user_message = child.text;
            req.temperature = config.target_temperature;
            req.request_tag = "target";
            model_output = gw.complete(req).text;
        }
        record.prompt_after = child;
        record.model_output = model_output;
        core::Verdict verdict = autorater.rate(child, model_output);
        record.score = verdict.score;
    } catch (const Error& e) {
        return fail(e.tag());
    }
    return record;
}

} // namespace

RolloutTree run_rollout(const Prompt& root, const core::TaskSpec& task,
                        const RolloutConfig& config, long seed, mutate::Mutator& mutator,
                        gateway::Gateway& gw, autorate::Autorater& autorater,
                        core::IdGen& ids) {
    config.validate();
    if (root.depth != 0) throw PreconditionError("rollout root must have depth 0");

    RolloutTree tree;
    tree.root = root;
    tree.max_depth = config.max_depth;

    const bool math_task = autorater.config().kind == autorate::AutoraterKind::MathCsp;
    std::vector<Prompt> live = {root};
    bool halted = false;

    for (int depth = 0; depth < config.max_depth && !halted && !live.empty(); ++depth) {
        std::vector<Prompt> next_live;
        bool success_this_level = false;

        for (const auto& node : live) {
            std::vector<mutate::EditProposal> proposals;
            try {
                auto concepts = mutator.extract_concepts(node, task, config.constitution);
                proposals = mutator.propose_edits(node, concepts, task, config.constitution,
                                                  config.branching);
            } catch (const Error&) {
                tree.terminal[node.id] = LeafStatus::Error;
                continue;
            }

            int valid_children = 0;
            auto process = [&](const mutate::EditProposal& p) {
                AceRecord rec = make_child_record(node, p, task, config, seed, ids.next(),
                                                  mutator, gw, autorater);
                const std::string id = rec.prompt_after.id;
                const bool errored = rec.error.has_value();
                const int score = errored ? 0 : *rec.score;
                tree.nodes.emplace(id, std::move(rec));
                if (errored) {
                    tree.terminal[id] = LeafStatus::Error;
                    return;
                }
                ++valid_children;
                if (score == 1) {
                    tree.terminal[id] = LeafStatus::Success;
                    success_this_level = true;
                } else if (depth + 1 >= config.max_depth) {
                    tree.terminal[id] = LeafStatus::DepthExhausted;
                } else {
                    next_live.push_back(tree.nodes.at(id).prompt_after);
                }
            };

            for (const auto& p : proposals) process(p);

            // Appendix-style Expand: top the node back up to `branching`
            // valid children when the math filter consumed some.
            if (math_task && valid_children < config.branching) {
                try {
                    auto extra = mutator.math_expand(node.text, proposals, task);
                    for (const auto& p : extra) {
                        if (valid_children >= config.branching) break;
                        process(p);
                    }
                } catch (const Error&) {
                    // expansion is best-effort; existing children stand
                }
            }
        }

        if (config.stop_on_success && success_this_level) {
            halted = true;
            for (const auto& p : next_live) tree.terminal[p.id] = LeafStatus::DepthExhausted;
            next_live.clear();
        }
        live = std::move(next_live);
    }

    if (tree.nodes.empty() && tree.terminal.empty())
        tree.terminal[root.id] = LeafStatus::DepthExhausted;
    return tree;
}

std::vector<RolloutTree> run_rollouts(const std::vector<std::string>& root_texts,
                                      const core::TaskSpec& task, const RolloutConfig& config,
                                      long seed, mutate::Mutator& mutator,
                                      gateway::Gateway& gw, autorate::Autorater& autorater) {
    config.validate();
    // One disjoint id-counter block per root keeps ids reproducible while
    // roots run concurrently.
    std::uint64_t per_level = 1;
    std::uint64_t block = 1;
    for (int d = 1; d <= config.max_depth; ++d) {
        per_level *= static_cast<std::uint64_t>(config.branching);
        block += 2 * per_level; // room for Expand replacements
    }
    block += 16;

    return util::parallel_map<RolloutTree>(
        root_texts.size(), static_cast<std::size_t>(config.root_workers),
        [&](std::size_t i) {
            core::IdGen ids(task.task_id, seed, static_cast<std::uint64_t>(i) * block);
            Prompt root;
            root.id = ids.next();
            root.text = root_texts[i];
            core::validate_prompt(root);
            return run_rollout(root, task, config, seed, mutator, gw, autorater, ids);
        });
}

std::string sample_leaf(const RolloutTree& tree, util::SeededRng& rng) {
    auto leaves = tree.leaves();
    return leaves[rng.below(leaves.size())];
}

RateStats success_rate(const std::vector<RolloutTree>& trees, const std::vector<long>& seeds) {
    if (trees.empty() || seeds.empty())
        throw PreconditionError("success_rate needs at least one tree and one seed");
    std::vector<double> rates;
    rates.reserve(seeds.size());
    for (long seed : seeds) {
        util::SeededRng rng(util::hash64("success_rate", static_cast<std::uint64_t>(seed)));
        long successes = 0;
        for (const auto& tree : trees) {
            std::string leaf = sample_leaf(tree, rng);
            auto it = tree.nodes.find(leaf);
            if (it != tree.nodes.end() && it->second.score && *it->second.score == 1)
                ++successes;
        }
        rates.push_back(static_cast<double>(successes) / static_cast<double>(trees.size()));
    }
    RateStats stats;
    for (double r : rates) stats.mean += r;
    stats.mean /= static_cast<double>(rates.size());
    if (rates.size() > 1) {
        double ss = 0.0;
        for (double r : rates) ss += (r - stats.mean) * (r - stats.mean);
        stats.std_dev = std::sqrt(ss / static_cast<double>(rates.size() - 1));
    }
    return stats;
}

std::vector<std::pair<int, double>> cumulative_success_curve(
    const std::vector<RolloutTree>& trees) {
    if (trees.empty()) throw PreconditionError("cumulative curve needs trees");
    int depth_cap = 1;
    for (const auto& t : trees) depth_cap = std::max(depth_cap, t.max_depth);

    std::vector<std::pair<int, double>> curve;
    for (int d = 1; d <= depth_cap; ++d) {
        long hit = 0;
        for (const auto& t : trees) {
            bool found = false;
            for (const auto& [id, rec] : t.nodes)
                if (rec.score && *rec.score == 1 && rec.prompt_after.depth <= d) {
                    found = true;
                    break;
                }
            if (found) ++hit;
        }
        curve.emplace_back(d, static_cast<double>(hit) / static_cast<double>(trees.size()));
    }
    return curve;
}

Harvest harvest_dataset(const std::vector<RolloutTree>& trees) {
    Harvest h;
    for (const auto& tree : trees) {
        for (const auto& [id, rec] : tree.nodes) {
            if (rec.error) {
                ++h.errored;
                continue;
            }
            (*rec.score == 1 ? h.positives : h.negatives)++;
            h.records.push_back(rec);
        }
    }
    return h;
}

} // namespace ace::rollout
