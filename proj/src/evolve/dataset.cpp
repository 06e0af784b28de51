#include "ace/evolve/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ace/util/rng.hpp"

namespace ace::evolve {

LabeledExample to_labeled_example(const core::AceRecord& record) {
    if (record.error)
        throw PreconditionError("cannot label an errored record: " + *record.error);
    return {record.prompt_before.text, record.edit.verbalization, record.prompt_after.text,
            *record.score};
}

std::vector<std::string> record_root_ids(const std::vector<core::AceRecord>& records) {
    std::map<std::string, const core::Prompt*> prompts;
    for (const auto& r : records) {
        prompts[r.prompt_before.id] = &r.prompt_before;
        prompts[r.prompt_after.id] = &r.prompt_after;
    }
    std::vector<std::string> roots;
    roots.reserve(records.size());
    for (const auto& r : records) {
        const core::Prompt* p = &r.prompt_before;
        while (p->parent_id) {
            auto it = prompts.find(*p->parent_id);
            if (it == prompts.end())
                throw InvariantViolation("broken lineage: missing prompt " + *p->parent_id);
            p = it->second;
        }
        roots.push_back(p->id);
    }
    return roots;
}

SplitDataset build_split(const std::vector<core::AceRecord>& records,
                         const std::array<double, 3>& ratios, long seed) {
    double ratio_sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(ratio_sum - 1.0) > 1e-9)
        throw PreconditionError("split ratios must sum to 1");
    for (double r : ratios)
        if (r <= 0.0) throw PreconditionError("split ratios must be positive");

    std::vector<std::string> roots = record_root_ids(records);

    // valid record indices grouped by root, in stable root order
    std::map<std::string, std::vector<std::size_t>> groups;
    long pos_total = 0, neg_total = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].error) continue;
        groups[roots[i]].push_back(i);
        (*records[i].score == 1 ? pos_total : neg_total)++;
    }
    if (pos_total == 0 || neg_total == 0)
        throw PreconditionError("need at least one record of each label to balance");

    struct Group {
        std::vector<std::size_t> indices;
        long pos = 0, neg = 0;
    };
    std::vector<Group> group_list;
    for (auto& [root, indices] : groups) {
        Group g;
        g.indices = std::move(indices);
        for (std::size_t i : g.indices)
            (*records[i].score == 1 ? g.pos : g.neg)++;
        group_list.push_back(std::move(g));
    }

    // Greedy assignment against per-label deficits: each whole root group
    // goes to the split that still needs its label mix the most, which keeps
    // every split balanceable even when roots carry correlated labels.
    std::array<std::vector<std::size_t>, 3> split_indices;
    util::SeededRng rng(util::hash64("split", static_cast<std::uint64_t>(seed)));
    rng.shuffle(group_list);
    std::array<double, 3> pos_deficit, neg_deficit;
    for (int s = 0; s < 3; ++s) {
        pos_deficit[s] = ratios[s] * static_cast<double>(pos_total);
        neg_deficit[s] = ratios[s] * static_cast<double>(neg_total);
    }
    for (const auto& g : group_list) {
        int best = 0;
        double best_score = -1e300;
        for (int s = 0; s < 3; ++s) {
            double score = pos_deficit[s] * static_cast<double>(g.pos) +
                           neg_deficit[s] * static_cast<double>(g.neg);
            if (score > best_score) {
                best = s;
                best_score = score;
            }
        }
        for (std::size_t i : g.indices) split_indices[best].push_back(i);
        pos_deficit[best] -= static_cast<double>(g.pos);
        neg_deficit[best] -= static_cast<double>(g.neg);
    }

    SplitDataset out;
    out.seed = seed;
    std::array<std::vector<LabeledExample>*, 3> targets{&out.train, &out.val, &out.test};
    for (int s = 0; s < 3; ++s) {
        auto& indices = split_indices[s];
        std::sort(indices.begin(), indices.end());
        std::vector<std::size_t> pos, neg;
        for (std::size_t i : indices)
            (*records[i].score == 1 ? pos : neg).push_back(i);
        // downsample the majority class with a seeded pick, keep stable order
        auto& majority = pos.size() > neg.size() ? pos : neg;
        std::size_t keep = std::min(pos.size(), neg.size());
        rng.shuffle(majority);
        majority.resize(keep);
        std::vector<std::size_t> kept;
        kept.insert(kept.end(), pos.begin(), pos.end());
        kept.insert(kept.end(), neg.begin(), neg.end());
        std::sort(kept.begin(), kept.end());
        for (std::size_t i : kept) targets[s]->push_back(to_labeled_example(records[i]));
    }
    return out;
}

} // namespace ace::evolve
