#pragma once

#include <cstdint>

#include "qcomp/models.hpp"

namespace qcomp::theory {

/// P[|S_i ∩ S_j| = u] for two independent uniform K-subsets of a P-key pool:
/// C(K,u) C(P-K,K-u) / C(P,K), evaluated in log space (no binomial
/// coefficient is ever formed, so C(10000, 88) and beyond are fine).
/// Throws UnsupportedRegime when 2K > P, std::invalid_argument when u > K.
double exact_overlap_pmf(std::uint32_t K, std::uint32_t P, std::uint32_t u);

/// Probability two uniform rings share at least q keys. Terms are summed from
/// the smallest upward with Neumaier compensation.
double exact_s_probability(std::uint32_t K, std::uint32_t P, std::uint32_t q);

/// Edge probability of the composed graph, p * s(K, P, q).
double exact_t_probability(const ModelParams& params);
double exact_t_probability(std::uint32_t K, std::uint32_t P, std::uint32_t q, double p);

/// Leading-order form (K²/P)^q / q!. Only accurate when K grows and K²/P is
/// small; for K²/P around 0.1 it overshoots the exact value by 10% or more.
double asymptotic_s(std::uint32_t K, std::uint32_t P, std::uint32_t q);

/// (n, k, t) together with the deviation alpha = n t - ln n - (k-1) ln ln n.
struct ScalingPoint {
  std::uint32_t n = 0;
  std::uint32_t k = 1;
  double t = 0.0;
  double alpha = 0.0;

  /// Edge probability rebuilt from alpha: (ln n + (k-1) ln ln n + alpha) / n.
  double reconstruct_t() const;
};

/// Requires n >= 3 (so ln ln n > 0), k >= 1 and t in [0, 1].
ScalingPoint scaling_alpha(std::uint32_t n, std::uint32_t k, double t);

/// exp(-exp(-alpha) / (k-1)!). Infinite alpha yields 0 or 1.
double predicted_k_connectivity(double alpha, std::uint32_t k);

/// Same limit as predicted_k_connectivity; min degree >= k is the necessary
/// condition that shares it.
double predicted_min_degree_at_least_k(double alpha, std::uint32_t k);

/// Limiting probability that G(n, p) is k-connected, from alpha(n, k, p).
double er_k_connectivity_prediction(std::uint32_t n, double p, std::uint32_t k);

/// Edge-probability threshold for k-connectivity at finite n:
/// (ln n + (k-1) ln ln n) / n. For k = 1 this is ln n / n.
double critical_edge_probability(std::uint32_t n, std::uint32_t k);

struct KStarResult {
  std::uint32_t k_star = 0;
  double t_at = 0.0;      ///< t(K*)
  double t_below = 0.0;   ///< t(K*-1), 0 if K* == q
  double threshold = 0.0;
  /// k > 1 uses (ln n + (k-1) ln ln n)/n, an extension beyond the k = 1 rule.
  bool extended_rule = false;
};

/// Smallest K with exact t(K, P, q, p) > critical_edge_probability(n, k),
/// scanning upward from K = q while 2K <= P. Throws UnsupportedRegime when
/// no such K exists.
KStarResult k_star(std::uint32_t n, std::uint32_t P, std::uint32_t q, double p, std::uint32_t k = 1);

/// Mean of the Poisson limit for the number of degree-h nodes:
/// n (nt)^h e^{-nt} / h!.
double poisson_degree_mean(std::uint32_t n, double t, std::uint32_t h);

/// Binomial key probability that makes the binomial intersection graph
/// embeddable in the uniform one: (K/P)(1 - sqrt(3 ln n / K)).
/// Throws UnsupportedRegime when K < 3 ln n.
double coupling_x(std::uint32_t n, std::uint32_t K, std::uint32_t P);

/// Edge probability of an Erdős–Rényi graph embeddable in the binomial
/// intersection graph: (P x²)^q / q!. The vanishing o(1/ln n) relative
/// correction has no finite-n value and is dropped.
double coupling_y(std::uint32_t P, double x, std::uint32_t q);

}  // namespace qcomp::theory
