#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace zoneseg {

// Scores of a linear-chain CRF over K labels. score(y) = start[y0] +
// sum_t emissions(t, y_t) + sum_t transitions(y_t, y_t+1) + end[y_last].
struct CrfScores {
  const Eigen::MatrixXd& emissions;    // L x K
  const Eigen::MatrixXd& transitions;  // K x K
  const Eigen::VectorXd& start;
  const Eigen::VectorXd& end;

  int length() const { return static_cast<int>(emissions.rows()); }
  int labels() const { return static_cast<int>(emissions.cols()); }
  void validate() const;
};

double sequence_score(const CrfScores& crf, std::span<const int> labels);

// Forward algorithm in log space.
double crf_log_partition(const CrfScores& crf);

struct ViterbiResult {
  std::vector<int> labels;
  double score = 0.0;
};

// Highest-scoring sequence; among equal maxima the lexicographically
// smallest one (every position prefers the lower label index).
ViterbiResult crf_viterbi(const CrfScores& crf);

struct CrfMarginals {
  Eigen::MatrixXd unary;                 // L x K
  std::vector<Eigen::MatrixXd> pairwise;  // L-1 entries of K x K
  double log_partition = 0.0;
};

// Forward-backward posteriors.
CrfMarginals crf_marginals(const CrfScores& crf);

struct CrfGradients {
  Eigen::MatrixXd emissions;
  Eigen::MatrixXd transitions;
  Eigen::VectorXd start;
  Eigen::VectorXd end;
};

struct CrfLoss {
  double loss = 0.0;  // log Z - score(gold)
  CrfGradients grads;
  CrfMarginals marginals;
};

// Throws ValidationError when gold has the wrong length or a label >= K.
CrfLoss crf_nll_and_grad(const CrfScores& crf, std::span<const int> gold);

}  // namespace zoneseg
