// Exact pair-classification optimum over all real thresholds.
#pragma once

#include <algorithm>
#include <vector>

namespace sentpw::oracle {

struct ExactThreshold {
    double threshold;
    double accuracy;
};

// Candidate thresholds: below the minimum, every midpoint of consecutive
// distinct sorted scores, and the maximum. Accuracy is counted directly.
inline ExactThreshold midpoint_scan(const std::vector<double>& scores, const std::vector<int>& labels) {
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<double> candidates{sorted.front() - 1.0};
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) candidates.push_back((sorted[i] + sorted[i + 1]) / 2);
    candidates.push_back(sorted.back());
    ExactThreshold best{candidates.front(), -1.0};
    for (double t : candidates) {
        std::size_t correct = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) correct += (scores[i] > t) == (labels[i] == 1);
        const double acc = static_cast<double>(correct) / static_cast<double>(scores.size());
        if (acc > best.accuracy) best = {t, acc};
    }
    return best;
}

}  // namespace sentpw::oracle
