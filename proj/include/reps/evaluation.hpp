#pragma once

#include <cstdint>
#include <vector>

#include "reps/dataset.hpp"

namespace reps {

inline constexpr int kDefaultKnnK = 10;
inline constexpr int kDefaultDomiasK = 5;

// Mixed-type embedding used by every distance computation: standardized
// continuous values followed by one-hot categorical blocks.
std::vector<double> embed(const Record& record, const Schema& schema);
std::vector<std::vector<double>> embed_all(const Dataset& dataset);

double euclidean(const std::vector<double>& a, const std::vector<double>& b);

struct DecileAssignment {
  std::vector<double> knn_scores;  // mean distance to k nearest, self excluded
  std::vector<int> deciles;        // 1..10, 10 = most outlying
};

// Brute-force kNN outlier scores over the train records; deciles by rank
// with stable index tie-breaking.
DecileAssignment knn_outlier_deciles(const Dataset& train,
                                     int k = kDefaultKnnK);

// score(q) = -min distance to any synthetic row; higher = more member-like.
std::vector<double> distance_mia(const Dataset& synthetic,
                                 const Dataset& queries);

// score(q) = mean k-distance to reference / mean k-distance to synthetic.
std::vector<double> domias_mia(const Dataset& synthetic,
                               const Dataset& reference,
                               const Dataset& queries,
                               int k = kDefaultDomiasK);

// Mann-Whitney AUC with average-rank tie handling; labels true = positive.
double auc(const std::vector<double>& scores, const std::vector<bool>& labels);

struct AdvantageMetrics {
  double overall = 0.0;
  std::vector<double> per_decile;  // 10 entries, decile 1..10
  double top_decile = 0.0;
  double inequality_ratio = 0.0;  // top / median of the 10 decile values
};

// Members carry decile tags (1..10); non-member queries are the shared
// negative pool for every per-decile AUC.
AdvantageMetrics advantage_metrics(
    const std::vector<double>& member_scores,
    const std::vector<int>& member_deciles,
    const std::vector<double>& non_member_scores);

struct TstrResult {
  double auroc = 0.5;
  bool degenerate = false;  // synthetic data had a single label class
};

// Train-on-synthetic, test-on-real: regularized logistic regression on the
// embedded synthetic rows, AUROC on the real test split.
TstrResult tstr(const Dataset& synthetic, const Dataset& real_test);

}  // namespace reps
