#pragma once

#include <cmath>

#include "ace/errors.hpp"

namespace ace::evolve {

// Per-epoch size and change-percentage schedule. Sizes interpolate linearly
// from size_start (epoch 0, the initial constitution) to size_end (epoch E),
// rounding half away from zero. The change percentage interpolates across
// the update epochs 1..E so the first update uses change_pct_start and the
// last uses change_pct_end.
struct EvolutionSchedule {
    int epochs = 1;       // E >= 1
    int batch_size = 100; // B
    int size_start = 10;  // K at epoch 0
    int size_end = 10;    // K at epoch E
    double change_pct_start = 10.0; // in (0, 100]
    double change_pct_end = 10.0;

    void validate() const {
        if (epochs < 1) throw InvariantViolation("schedule needs epochs >= 1");
        if (batch_size < 1) throw InvariantViolation("schedule needs batch_size >= 1");
        if (size_start < 1 || size_end < 1)
            throw InvariantViolation("constitution sizes must be >= 1");
        for (double pct : {change_pct_start, change_pct_end})
            if (!(pct > 0.0 && pct <= 100.0))
                throw InvariantViolation("change percentage must be in (0, 100]");
    }

    // epoch in [0, epochs]
    int size_at(int epoch) const {
        double t = static_cast<double>(epoch) / epochs;
        return static_cast<int>(std::lround(size_start + (size_end - size_start) * t));
    }

    // epoch in [1, epochs]
    double change_pct_at(int epoch) const {
        if (epochs == 1) return change_pct_start;
        double t = static_cast<double>(epoch - 1) / (epochs - 1);
        return change_pct_start + (change_pct_end - change_pct_start) * t;
    }

    // ceil(pct x K): the cap on strategies an update may rewrite
    static int max_title_changes(double change_pct, int k) {
        return static_cast<int>(std::ceil(change_pct / 100.0 * k));
    }
};

} // namespace ace::evolve
