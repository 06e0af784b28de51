#pragma once

#include <array>
#include <string>
#include <vector>

#include "ace/core/types.hpp"

namespace ace::evolve {

// One surrogate-classifier example derived from an error-free AceRecord.
struct LabeledExample {
    std::string before_text;
    std::string edit_verbalization;
    std::string after_text;
    int true_label = 0;
};

LabeledExample to_labeled_example(const core::AceRecord& record);

struct SplitDataset {
    std::vector<LabeledExample> train, val, test;
    long seed = 0;
};

// Lineage-disjoint, label-balanced train/val/test split:
//  - records group by their depth-0 root prompt; a root never spans splits
//  - root groups are assigned to splits by seeded shuffle + greedy
//    record-count matching against the ratios, stratified by the group's
//    majority label so label mix stays proportional
//  - each split then downsamples its majority class to balance
// Throws when a label is missing entirely or ratios are invalid.
SplitDataset build_split(const std::vector<core::AceRecord>& records,
                         const std::array<double, 3>& ratios, long seed);

// Root prompt id of a record (walks parent links through the record set).
std::vector<std::string> record_root_ids(const std::vector<core::AceRecord>& records);

} // namespace ace::evolve
