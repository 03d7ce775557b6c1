#ifndef SENTPW_EVAL_HPP
#define SENTPW_EVAL_HPP

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sentpw/linalg.hpp"

namespace sentpw {

inline constexpr double kDefaultGridStep = 0.001;

// Cosine of two vectors; 0 when either is the zero vector.
double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b);

// Ascending thresholds strictly inside (0, 1). When 1/step is an integer N the
// points are k/N exactly; otherwise k * step.
std::vector<double> threshold_grid(double step);

struct ThresholdResult {
    double threshold = 0.0;
    double accuracy = 0.0;
};

// Scans threshold_grid(grid_step) ascending, predicting positive iff
// score > threshold, and keeps the first (smallest) threshold with the best
// accuracy. Throws std::invalid_argument on an empty or mismatched input or a
// step outside (0, 1).
ThresholdResult threshold_search(std::span<const double> scores, std::span<const int> labels,
                                 double grid_step = kDefaultGridStep);

struct PairClassification {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Positive iff score > threshold. F1 is 0 when there are no true positives.
PairClassification pair_classification(std::span<const double> scores, std::span<const int> labels,
                                       double threshold);

// Fraction of rows with cos(a, p) > cos(a, n); ties count as wrong.
double triplet_accuracy(const Matrix& anchors, const Matrix& positives, const Matrix& negatives);

struct HitReport {
    std::size_t n = 1;
    double hit_rate = 0.0;
    std::size_t hits = 0;
    std::size_t evaluated = 0;
    std::size_t flagged = 0;  // queries with no same-label gallery item
};

// For each query, the gallery is ranked by descending cosine with ties broken
// by gallery index; a hit means a same-label item in the top n. If
// self_index[q] is set, that gallery item is the query's own record and is
// left out of its ranking. Throws std::invalid_argument for n == 0.
std::vector<HitReport> hit_at_n(const Matrix& queries, const Matrix& gallery,
                                 const std::vector<int>& query_labels,
                                 const std::vector<int>& gallery_labels,
                                 const std::vector<std::size_t>& ns,
                                 const std::vector<std::optional<std::size_t>>& self_index = {},
                                 int threads = 1);

HitReport hit_at_n(const Matrix& queries, const Matrix& gallery, const std::vector<int>& query_labels,
                   const std::vector<int>& gallery_labels, std::size_t n,
                   const std::vector<std::optional<std::size_t>>& self_index = {});

inline constexpr double kInterIntraInfinite = std::numeric_limits<double>::infinity();

// mean over classes of the distance from a class centre to the nearest other
// centre, divided by the mean over classes of the mean member-to-centre
// distance. Returns kInterIntraInfinite when the intra term is below 1e-12.
// Throws DataError with fewer than two classes.
double inter_intra(const Matrix& embeddings, const std::vector<int>& labels);

// Centres the rows and projects them on the two leading right singular
// vectors. Each axis is signed so its largest-magnitude loading is positive.
// Returns zeros for rank-0 input. Throws std::invalid_argument for m < 2.
Matrix pca2d(const Matrix& embeddings);

// Named metrics for one evaluation task, in insertion order.
struct EvalReport {
    std::string task;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::pair<std::string, std::size_t>> counts;

    void add(std::string key, double value) { metrics.emplace_back(std::move(key), value); }
    void count(std::string key, std::size_t value) { counts.emplace_back(std::move(key), value); }

    // `key=value` lines.
    std::string to_text() const;
    // `key\tvalue` lines, starting with `task\t<task>`.
    std::string to_tsv() const;
};

}  // namespace sentpw

#endif  // SENTPW_EVAL_HPP
