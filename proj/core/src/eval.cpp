#include "sentpw/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sentpw/errors.hpp"
#include "sentpw/numfmt.hpp"
#include "sentpw/parallel.hpp"

namespace sentpw {

double cosine(const Eigen::Ref<const Eigen::RowVectorXd>& a,
              const Eigen::Ref<const Eigen::RowVectorXd>& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

std::vector<double> threshold_grid(double step) {
    if (!(step > 0.0 && step < 1.0)) throw std::invalid_argument("grid step must be in (0, 1)");
    std::vector<double> grid;
    const double inverse = 1.0 / step;
    const double rounded = std::round(inverse);
    if (std::abs(inverse - rounded) < 1e-9 * rounded) {
        const auto n = static_cast<long long>(rounded);
        for (long long k = 1; k < n; ++k) grid.push_back(static_cast<double>(k) / static_cast<double>(n));
    } else {
        for (long long k = 1;; ++k) {
            const double t = static_cast<double>(k) * step;
            if (t >= 1.0) break;
            grid.push_back(t);
        }
    }
    return grid;
}

namespace {

void check_scored(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("one label per score required");
    for (int l : labels) {
        if (l != 0 && l != 1) throw std::invalid_argument("pair labels must be 0 or 1");
    }
}

}  // namespace

ThresholdResult threshold_search(std::span<const double> scores, std::span<const int> labels,
                                 double grid_step) {
    check_scored(scores, labels);
    if (scores.empty()) throw std::invalid_argument("threshold search needs a non-empty dev set");
    const auto grid = threshold_grid(grid_step);

    // Sweep the grid against scores sorted ascending: every score <= t is
    // predicted negative.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));

    std::size_t below = 0;           // scores <= t
    std::size_t negatives_below = 0;  // correct negatives
    ThresholdResult best{grid.front(), -1.0};
    for (double t : grid) {
        while (below < order.size() && scores[order[below]] <= t) {
            negatives_below += labels[order[below]] == 0;
            ++below;
        }
        const std::size_t positives_above = positives - (below - negatives_below);
        const double acc = static_cast<double>(negatives_below + positives_above) /
                           static_cast<double>(scores.size());
        if (acc > best.accuracy) best = {t, acc};
    }
    return best;
}

PairClassification pair_classification(std::span<const double> scores, std::span<const int> labels,
                                       double threshold) {
    check_scored(scores, labels);
    PairClassification r;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted = scores[i] > threshold;
        const bool actual = labels[i] == 1;
        if (predicted && actual) ++r.tp;
        else if (predicted) ++r.fp;
        else if (actual) ++r.fn;
        else ++r.tn;
    }
    if (!scores.empty()) {
        r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(scores.size());
    }
    if (r.tp + r.fp > 0) r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    if (r.tp + r.fn > 0) r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    if (r.tp > 0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

double triplet_accuracy(const Matrix& anchors, const Matrix& positives, const Matrix& negatives) {
    if (anchors.rows() != positives.rows() || anchors.rows() != negatives.rows()) {
        throw std::invalid_argument("triplet matrices must have the same number of rows");
    }
    if (anchors.rows() == 0) return 0.0;
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < anchors.rows(); ++i) {
        correct += cosine(anchors.row(i), positives.row(i)) > cosine(anchors.row(i), negatives.row(i));
    }
    return static_cast<double>(correct) / static_cast<double>(anchors.rows());
}

std::vector<HitReport> hit_at_n(const Matrix& queries, const Matrix& gallery,
                                const std::vector<int>& query_labels,
                                const std::vector<int>& gallery_labels,
                                const std::vector<std::size_t>& ns,
                                const std::vector<std::optional<std::size_t>>& self_index,
                                int threads) {
    if (static_cast<std::size_t>(queries.rows()) != query_labels.size() ||
        static_cast<std::size_t>(gallery.rows()) != gallery_labels.size()) {
        throw std::invalid_argument("one label per embedding row required");
    }
    if (!self_index.empty() && self_index.size() != query_labels.size()) {
        throw std::invalid_argument("self_index must be empty or have one entry per query");
    }
    for (std::size_t n : ns) {
        if (n == 0) throw std::invalid_argument("Hit@n needs n >= 1");
    }

    constexpr std::size_t kUnranked = static_cast<std::size_t>(-1);
    const std::size_t q_count = query_labels.size();
    const auto g_count = gallery.rows();
    // rank of the first same-label item in the tie-broken ordering
    std::vector<std::size_t> first_hit(q_count, kUnranked);
    parallel_for(q_count, threads, [&](std::size_t q) {
        const std::size_t self =
            self_index.empty() || !self_index[q] ? kUnranked : *self_index[q];
        std::vector<double> score(static_cast<std::size_t>(g_count));
        Eigen::Index best = -1;
        for (Eigen::Index g = 0; g < g_count; ++g) {
            score[static_cast<std::size_t>(g)] = cosine(queries.row(static_cast<Eigen::Index>(q)), gallery.row(g));
            if (self == static_cast<std::size_t>(g)) continue;
            if (gallery_labels[static_cast<std::size_t>(g)] != query_labels[q]) continue;
            if (best < 0 || score[static_cast<std::size_t>(g)] > score[static_cast<std::size_t>(best)]) best = g;
        }
        if (best < 0) return;
        const double top = score[static_cast<std::size_t>(best)];
        std::size_t rank = 0;
        for (Eigen::Index g = 0; g < g_count; ++g) {
            if (self == static_cast<std::size_t>(g)) continue;
            const double s = score[static_cast<std::size_t>(g)];
            if (s > top || (s == top && g < best)) ++rank;
        }
        first_hit[q] = rank;
    });

    std::vector<HitReport> reports;
    for (std::size_t n : ns) {
        HitReport r;
        r.n = n;
        for (std::size_t q = 0; q < q_count; ++q) {
            if (first_hit[q] == kUnranked) {
                ++r.flagged;
                continue;
            }
            ++r.evaluated;
            r.hits += first_hit[q] < n;
        }
        r.hit_rate = r.evaluated == 0 ? 0.0 : static_cast<double>(r.hits) / static_cast<double>(r.evaluated);
        reports.push_back(r);
    }
    return reports;
}

HitReport hit_at_n(const Matrix& queries, const Matrix& gallery, const std::vector<int>& query_labels,
                   const std::vector<int>& gallery_labels, std::size_t n,
                   const std::vector<std::optional<std::size_t>>& self_index) {
    return hit_at_n(queries, gallery, query_labels, gallery_labels, std::vector<std::size_t>{n},
                    self_index)
        .front();
}

double inter_intra(const Matrix& embeddings, const std::vector<int>& labels) {
    if (static_cast<std::size_t>(embeddings.rows()) != labels.size()) {
        throw std::invalid_argument("one label per embedding row required");
    }
    std::map<int, std::vector<Eigen::Index>> members;
    for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(static_cast<Eigen::Index>(i));
    if (members.size() < 2) throw DataError("inter/intra ratio needs at least two classes");

    const auto d = embeddings.cols();
    std::vector<Eigen::RowVectorXd> centres;
    double intra_sum = 0.0;
    for (const auto& [label, rows] : members) {
        Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(d);
        for (auto r : rows) c += embeddings.row(r);
        c /= static_cast<double>(rows.size());
        double spread = 0.0;
        for (auto r : rows) spread += (embeddings.row(r) - c).norm();
        intra_sum += spread / static_cast<double>(rows.size());
        centres.push_back(std::move(c));
    }
    double inter_sum = 0.0;
    for (std::size_t a = 0; a < centres.size(); ++a) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < centres.size(); ++b) {
            if (a != b) nearest = std::min(nearest, (centres[a] - centres[b]).norm());
        }
        inter_sum += nearest;
    }
    const auto k = static_cast<double>(centres.size());
    const double intra = intra_sum / k;
    if (intra < 1e-12) return kInterIntraInfinite;
    return (inter_sum / k) / intra;
}

Matrix pca2d(const Matrix& embeddings) {
    const auto m = embeddings.rows();
    if (m < 2) throw std::invalid_argument("pca2d needs at least two points");
    Matrix out = Matrix::Zero(m, 2);
    if (embeddings.cols() == 0) return out;
    const Matrix centred = embeddings.rowwise() - embeddings.colwise().mean();
    Eigen::JacobiSVD<Matrix> svd(centred, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 1e-12 * std::max(1.0, centred.cwiseAbs().maxCoeff())) return out;
    const auto axes = std::min<Eigen::Index>(2, sv.size());
    for (Eigen::Index k = 0; k < axes; ++k) {
        if (sv(k) <= 1e-12 * sv(0)) break;
        Vector dir = svd.matrixV().col(k);
        Eigen::Index lead = 0;
        dir.cwiseAbs().maxCoeff(&lead);
        if (dir(lead) < 0.0) dir = -dir;
        out.col(k) = centred * dir;
    }
    return out;
}

std::string EvalReport::to_text() const {
    std::string out;
    for (const auto& [k, v] : metrics) out += k + '=' + format_double(v) + '\n';
    for (const auto& [k, v] : counts) out += k + '=' + std::to_string(v) + '\n';
    return out;
}

std::string EvalReport::to_tsv() const {
    std::string out = "task\t" + task + '\n';
    for (const auto& [k, v] : metrics) out += k + '\t' + format_double(v) + '\n';
    for (const auto& [k, v] : counts) out += k + '\t' + std::to_string(v) + '\n';
    return out;
}

}  // namespace sentpw
