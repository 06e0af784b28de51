#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ace/autorate/autorate.hpp"
#include "ace/core/ids.hpp"
#include "ace/core/types.hpp"
#include "ace/mutate/mutate.hpp"
#include "ace/util/rng.hpp"

namespace ace::rollout {

struct RolloutConfig {
    int branching = 2;                  // edits sampled per prompt
    int max_depth = 3;                  // ACE sequence length cap
    std::vector<long> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::optional<core::Constitution> constitution;
    bool stop_on_success = true;
    double target_temperature = 0.7;
    int root_workers = 4;               // roots processed concurrently

    void validate() const {
        if (branching < 1) throw InvariantViolation("branching must be >= 1");
        if (max_depth < 1) throw InvariantViolation("max_depth must be >= 1");
        if (seeds.empty()) throw InvariantViolation("at least one seed required");
    }
};

enum class LeafStatus { Success, DepthExhausted, Error };

std::string to_string(LeafStatus status);
LeafStatus leaf_status_from_string(const std::string& s);

// Expansion tree for one initial prompt. Nodes are keyed by prompt_after id;
// node ids sort in creation order, so iteration is deterministic.
struct RolloutTree {
    core::Prompt root;
    std::map<std::string, core::AceRecord> nodes;
    std::map<std::string, LeafStatus> terminal; // per leaf
    int max_depth = 0;                          // the config cap, kept for curves

    std::vector<std::string> children_of(const std::string& prompt_id) const;
    std::vector<std::string> leaves() const; // sorted; root id if nothing expanded
};

// Breadth-wise expansion of one root: extract concepts, propose `branching`
// edits (constitution-guided when supplied), apply each, query the target
// model, rate. Score-1 children are terminal successes; with stop_on_success
// the first success halts deeper expansion of this root. All per-edit
// failures are recorded in-tree as error leaves, never thrown.
//
// Math tasks get the extra validity pipeline: a mutated problem that no
// longer parses goes through one Correct call, and nodes that fall short of
// `branching` valid children get one Expand call to top the proposals up.
RolloutTree run_rollout(const core::Prompt& root, const core::TaskSpec& task,
                        const RolloutConfig& config, long seed, mutate::Mutator& mutator,
                        gateway::Gateway& gw, autorate::Autorater& autorater,
                        core::IdGen& ids);

// Runs all roots (concurrently, one id block per root) for one seed.
std::vector<RolloutTree> run_rollouts(const std::vector<std::string>& root_texts,
                                      const core::TaskSpec& task, const RolloutConfig& config,
                                      long seed, mutate::Mutator& mutator,
                                      gateway::Gateway& gw, autorate::Autorater& autorater);

// Uniform draw over root-to-leaf paths, identified by the leaf id.
std::string sample_leaf(const RolloutTree& tree, util::SeededRng& rng);

struct RateStats {
    double mean = 0.0;
    double std_dev = 0.0; // sample standard deviation across seeds
};

// Per seed: sample one path per root and count it a success when it ends in
// a success leaf; the rate is the successful fraction of roots. Mean +/- std
// across seeds.
RateStats success_rate(const std::vector<RolloutTree>& trees, const std::vector<long>& seeds);

// Fraction of roots with a success at depth <= d, for d = 1..max depth.
std::vector<std::pair<int, double>> cumulative_success_curve(
    const std::vector<RolloutTree>& trees);

struct Harvest {
    std::vector<core::AceRecord> records; // error-free, both labels
    long positives = 0;
    long negatives = 0;
    long errored = 0; // dropped
};

Harvest harvest_dataset(const std::vector<RolloutTree>& trees);

} // namespace ace::rollout
