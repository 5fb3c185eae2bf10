#include "zoneseg/crf.hpp"

#include <cmath>
#include <limits>

#include "zoneseg/error.hpp"

namespace zoneseg {
namespace {

double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace

void CrfScores::validate() const {
  const Eigen::Index k = emissions.cols();
  if (emissions.rows() < 1) throw DimensionMismatchError("CRF needs at least one position");
  if (k < 1) throw DimensionMismatchError("CRF needs at least one label");
  if (transitions.rows() != k || transitions.cols() != k || start.size() != k ||
      end.size() != k) {
    throw DimensionMismatchError("CRF tensors disagree with " + std::to_string(k) +
                                 " labels");
  }
}

double sequence_score(const CrfScores& crf, std::span<const int> labels) {
  crf.validate();
  if (static_cast<int>(labels.size()) != crf.length()) {
    throw ValidationError("label sequence length does not match emissions");
  }
  double score = crf.start(labels[0]) + crf.end(labels.back());
  for (int t = 0; t < crf.length(); ++t) {
    score += crf.emissions(t, labels[static_cast<std::size_t>(t)]);
    if (t > 0) {
      score += crf.transitions(labels[static_cast<std::size_t>(t - 1)],
                               labels[static_cast<std::size_t>(t)]);
    }
  }
  return score;
}

namespace {

// alpha(t, j): log-sum of all prefixes ending in label j at position t.
Eigen::MatrixXd forward_messages(const CrfScores& crf) {
  const int length = crf.length();
  const int k = crf.labels();
  Eigen::MatrixXd alpha(length, k);
  alpha.row(0) = (crf.start + crf.emissions.row(0).transpose()).transpose();
  for (int t = 1; t < length; ++t) {
    for (int j = 0; j < k; ++j) {
      alpha(t, j) = crf.emissions(t, j) +
                    log_sum_exp(alpha.row(t - 1).transpose() + crf.transitions.col(j));
    }
  }
  return alpha;
}

// beta(t, i): log-sum of all suffixes after position t given label i at t.
Eigen::MatrixXd backward_messages(const CrfScores& crf) {
  const int length = crf.length();
  const int k = crf.labels();
  Eigen::MatrixXd beta(length, k);
  beta.row(length - 1) = crf.end.transpose();
  for (int t = length - 2; t >= 0; --t) {
    const Eigen::VectorXd next =
        crf.emissions.row(t + 1).transpose() + beta.row(t + 1).transpose();
    for (int i = 0; i < k; ++i) {
      beta(t, i) = log_sum_exp(crf.transitions.row(i).transpose() + next);
    }
  }
  return beta;
}

}  // namespace

double crf_log_partition(const CrfScores& crf) {
  crf.validate();
  const Eigen::MatrixXd alpha = forward_messages(crf);
  return log_sum_exp(alpha.row(crf.length() - 1).transpose() + crf.end);
}

ViterbiResult crf_viterbi(const CrfScores& crf) {
  crf.validate();
  const int length = crf.length();
  const int k = crf.labels();

  // best(t, j): best suffix score from position t onward given label j at t,
  // including emissions(t, j). Decoding then walks forward, so each position
  // picks the lowest index among labels that still reach the optimum.
  Eigen::MatrixXd best(length, k);
  best.row(length - 1) = (crf.emissions.row(length - 1).transpose() + crf.end).transpose();
  for (int t = length - 2; t >= 0; --t) {
    for (int i = 0; i < k; ++i) {
      best(t, i) = crf.emissions(t, i) +
                   (crf.transitions.row(i) + best.row(t + 1)).maxCoeff();
    }
  }

  ViterbiResult result;
  result.labels.resize(static_cast<std::size_t>(length));
  auto pick = [k](auto&& score_of) {
    int arg = 0;
    double top = score_of(0);
    for (int j = 1; j < k; ++j) {
      const double s = score_of(j);
      if (s > top) {
        top = s;
        arg = j;
      }
    }
    return std::pair{arg, top};
  };
  auto [first, total] = pick([&](int j) { return crf.start(j) + best(0, j); });
  result.labels[0] = first;
  result.score = total;
  for (int t = 1; t < length; ++t) {
    const int prev = result.labels[static_cast<std::size_t>(t - 1)];
    result.labels[static_cast<std::size_t>(t)] =
        pick([&](int j) { return crf.transitions(prev, j) + best(t, j); }).first;
  }
  return result;
}

CrfMarginals crf_marginals(const CrfScores& crf) {
  crf.validate();
  const int length = crf.length();
  const int k = crf.labels();
  const Eigen::MatrixXd alpha = forward_messages(crf);
  const Eigen::MatrixXd beta = backward_messages(crf);

  CrfMarginals out;
  out.log_partition = log_sum_exp(alpha.row(length - 1).transpose() + crf.end);
  out.unary = (alpha + beta).array() - out.log_partition;
  out.unary = out.unary.array().exp();
  out.pairwise.reserve(static_cast<std::size_t>(std::max(0, length - 1)));
  for (int t = 0; t + 1 < length; ++t) {
    Eigen::MatrixXd xi(k, k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        xi(i, j) = std::exp(alpha(t, i) + crf.transitions(i, j) + crf.emissions(t + 1, j) +
                            beta(t + 1, j) - out.log_partition);
      }
    }
    out.pairwise.push_back(std::move(xi));
  }
  return out;
}

CrfLoss crf_nll_and_grad(const CrfScores& crf, std::span<const int> gold) {
  crf.validate();
  const int length = crf.length();
  const int k = crf.labels();
  if (static_cast<int>(gold.size()) != length) {
    throw ValidationError("gold sequence has " + std::to_string(gold.size()) +
                          " labels for " + std::to_string(length) + " positions");
  }
  for (int label : gold) {
    if (label < 0 || label >= k) {
      throw ValidationError("gold label " + std::to_string(label) + " outside [0, " +
                            std::to_string(k) + ")");
    }
  }

  CrfLoss out;
  out.marginals = crf_marginals(crf);
  out.loss = out.marginals.log_partition - sequence_score(crf, gold);

  CrfGradients& g = out.grads;
  g.emissions = out.marginals.unary;
  g.transitions = Eigen::MatrixXd::Zero(k, k);
  for (const auto& xi : out.marginals.pairwise) g.transitions += xi;
  g.start = out.marginals.unary.row(0).transpose();
  g.end = out.marginals.unary.row(length - 1).transpose();

  for (int t = 0; t < length; ++t) {
    g.emissions(t, gold[static_cast<std::size_t>(t)]) -= 1.0;
    if (t > 0) {
      g.transitions(gold[static_cast<std::size_t>(t - 1)], gold[static_cast<std::size_t>(t)]) -=
          1.0;
    }
  }
  g.start(gold.front()) -= 1.0;
  g.end(gold.back()) -= 1.0;
  return out;
}

}  // namespace zoneseg
