#include "reps/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace reps {

std::vector<double> embed(const Record& record, const Schema& schema) {
  std::vector<double> out;
  out.reserve(schema.continuous_count() + 4 * schema.categorical_count());
  std::size_t ci = 0, ki = 0;
  for (const auto& f : schema.features) {
    if (f.kind == FeatureKind::kContinuous) {
      out.push_back(record.continuous_values[ci++]);
    } else {
      const auto c = static_cast<std::size_t>(record.categorical_values[ki++]);
      for (std::size_t v = 0; v < f.categories.size(); ++v)
        out.push_back(v == c ? 1.0 : 0.0);
    }
  }
  return out;
}

std::vector<std::vector<double>> embed_all(const Dataset& dataset) {
  std::vector<std::vector<double>> out;
  out.reserve(dataset.rows.size());
  for (const auto& row : dataset.rows) out.push_back(embed(row, dataset.schema));
  return out;
}

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

namespace {

// Mean of the k smallest distances from q to the rows of `points`.
double mean_k_distance(const std::vector<double>& q,
                       const std::vector<std::vector<double>>& points,
                       std::size_t k, std::size_t skip_index =
                           std::numeric_limits<std::size_t>::max()) {
  std::vector<double> dists;
  dists.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == skip_index) continue;
    dists.push_back(euclidean(q, points[i]));
  }
  std::nth_element(dists.begin(), dists.begin() + static_cast<long>(k - 1),
                   dists.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += dists[i];
  return sum / static_cast<double>(k);
}

}  // namespace

DecileAssignment knn_outlier_deciles(const Dataset& train, int k) {
  const std::size_t n = train.rows.size();
  if (n <= static_cast<std::size_t>(k))
    throw TooFewRecords("need more than k train records");
  const auto points = embed_all(train);

  DecileAssignment out;
  out.knn_scores.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.knn_scores[i] =
        mean_k_distance(points[i], points, static_cast<std::size_t>(k), i);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return out.knn_scores[a] < out.knn_scores[b];
  });
  out.deciles.resize(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    const auto d = static_cast<int>(rank * 10 / n) + 1;
    out.deciles[order[rank]] = std::min(d, 10);
  }
  return out;
}

std::vector<double> distance_mia(const Dataset& synthetic,
                                 const Dataset& queries) {
  if (synthetic.rows.empty()) throw EmptySynthetic("synthetic data is empty");
  const auto synth = embed_all(synthetic);
  std::vector<double> scores;
  scores.reserve(queries.rows.size());
  for (const auto& row : queries.rows) {
    const auto q = embed(row, queries.schema);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : synth) best = std::min(best, euclidean(q, s));
    scores.push_back(-best);
  }
  return scores;
}

std::vector<double> domias_mia(const Dataset& synthetic,
                               const Dataset& reference,
                               const Dataset& queries, int k) {
  const auto kk = static_cast<std::size_t>(k);
  if (synthetic.rows.size() < kk || reference.rows.size() < kk)
    throw TooFewRecords("synthetic and reference sets need at least k rows");
  const auto synth = embed_all(synthetic);
  const auto ref = embed_all(reference);
  std::vector<double> scores;
  scores.reserve(queries.rows.size());
  for (const auto& row : queries.rows) {
    const auto q = embed(row, queries.schema);
    const double to_ref = mean_k_distance(q, ref, kk);
    const double to_synth = std::max(
        mean_k_distance(q, synth, kk),
        std::numeric_limits<double>::epsilon());
    scores.push_back(to_ref / to_synth);
  }
  return scores;
}

double auc(const std::vector<double>& scores,
           const std::vector<bool>& labels) {
  if (scores.size() != labels.size())
    throw LengthMismatch("scores and labels differ in length");
  std::size_t n_pos = 0;
  for (bool l : labels) n_pos += l ? 1 : 0;
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw SingleClass("both classes must be present");

  // Average ranks; AUC = (rank-sum of positives - n_pos(n_pos+1)/2) /
  // (n_pos * n_neg).
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return scores[a] < scores[b];
  });
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i) + j) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t)
      if (labels[order[t]]) pos_rank_sum += mean_rank;
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) /
         (np * static_cast<double>(n_neg));
}

AdvantageMetrics advantage_metrics(
    const std::vector<double>& member_scores,
    const std::vector<int>& member_deciles,
    const std::vector<double>& non_member_scores) {
  if (member_scores.size() != member_deciles.size())
    throw LengthMismatch("member scores and deciles differ in length");

  auto adv = [&](const std::vector<double>& members) {
    std::vector<double> scores = members;
    scores.insert(scores.end(), non_member_scores.begin(),
                  non_member_scores.end());
    std::vector<bool> labels(members.size(), true);
    labels.resize(scores.size(), false);
    return std::abs(2.0 * auc(scores, labels) - 1.0);
  };

  AdvantageMetrics out;
  out.overall = adv(member_scores);
  for (int d = 1; d <= 10; ++d) {
    std::vector<double> group;
    for (std::size_t i = 0; i < member_scores.size(); ++i)
      if (member_deciles[i] == d) group.push_back(member_scores[i]);
    if (group.empty())
      throw EmptyDecile("decile " + std::to_string(d) + " has no members");
    out.per_decile.push_back(adv(group));
  }
  out.top_decile = out.per_decile[9];

  std::vector<double> sorted = out.per_decile;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[4] + sorted[5]);
  out.inequality_ratio =
      out.top_decile / std::max(median, 1e-12);
  return out;
}

namespace {

constexpr double kLogRegLambda = 1e-4;
constexpr double kLogRegTol = 1e-6;
constexpr int kLogRegMaxIter = 1000;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Full-batch gradient descent with a Lipschitz step size (top Gram
// eigenvalue estimated by power iteration) and Nesterov momentum.
std::vector<double> fit_logistic(const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y) {
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();  // includes intercept column

  // Power iteration for ||X||_2^2 / n.
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double eig = 1.0;
  for (int it = 0; it < 50; ++it) {
    std::vector<double> xv(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) xv[i] += x[i][j] * v[j];
    std::vector<double> next(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j) next[j] += x[i][j] * xv[i];
    double norm = 0.0;
    for (double t : next) norm += t * t;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    eig = norm / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) next[j] /= norm;
    v = std::move(next);
  }
  const double step = 1.0 / (eig / 4.0 + kLogRegLambda);

  std::vector<double> w(d, 0.0), w_prev(d, 0.0), z(d, 0.0);
  double t_momentum = 1.0;
  for (int iter = 0; iter < kLogRegMaxIter; ++iter) {
    std::vector<double> grad(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += z[j] * x[i][j];
      const double err = sigmoid(dot) - static_cast<double>(y[i]);
      for (std::size_t j = 0; j < d; ++j) grad[j] += err * x[i][j];
    }
    double grad_norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      grad[j] /= static_cast<double>(n);
      if (j + 1 < d) grad[j] += kLogRegLambda * z[j];  // intercept unpenalized
      grad_norm += grad[j] * grad[j];
    }
    if (std::sqrt(grad_norm) < kLogRegTol) {
      w = z;
      break;
    }
    w_prev = w;
    for (std::size_t j = 0; j < d; ++j) w[j] = z[j] - step * grad[j];
    const double t_next =
        (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum)) / 2.0;
    for (std::size_t j = 0; j < d; ++j)
      z[j] = w[j] + (t_momentum - 1.0) / t_next * (w[j] - w_prev[j]);
    t_momentum = t_next;
  }
  return w;
}

}  // namespace

TstrResult tstr(const Dataset& synthetic, const Dataset& real_test) {
  TstrResult result;
  std::size_t pos = 0;
  for (const auto& row : synthetic.rows) pos += row.label == 1 ? 1 : 0;
  if (synthetic.rows.empty() || pos == 0 || pos == synthetic.rows.size()) {
    result.degenerate = true;
    result.auroc = 0.5;
    return result;
  }

  auto with_intercept = [](std::vector<double> e) {
    e.push_back(1.0);
    return e;
  };
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (const auto& row : synthetic.rows) {
    x.push_back(with_intercept(embed(row, synthetic.schema)));
    y.push_back(row.label);
  }
  const auto w = fit_logistic(x, y);

  std::vector<double> scores;
  std::vector<bool> labels;
  for (const auto& row : real_test.rows) {
    const auto e = with_intercept(embed(row, real_test.schema));
    double dot = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) dot += w[j] * e[j];
    scores.push_back(dot);
    labels.push_back(row.label == 1);
  }
  result.auroc = auc(scores, labels);
  return result;
}

}  // namespace reps
