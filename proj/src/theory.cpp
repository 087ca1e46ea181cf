#include "qcomp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcomp/errors.hpp"

namespace qcomp::theory {

namespace {

double log_factorial(std::uint32_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

void require_overlap_regime(std::uint32_t K, std::uint32_t P) {
  if (K < 1) throw std::invalid_argument("key ring size K must be >= 1");
  if (2ull * K > P) {
    throw UnsupportedRegime("overlap law needs P >= 2K, got K = " + std::to_string(K) +
                            ", P = " + std::to_string(P));
  }
}

/// log P[|S_i ∩ S_j| = u] for u = 0..K. The u = 0 anchor is
/// log C(P-K,K)/C(P,K) = sum_i log1p(-K/(P-i)); later terms follow from the
/// ratio pmf(u+1)/pmf(u) = (K-u)^2 / ((u+1)(P-2K+u+1)). Both stay accurate
/// where differences of lgamma values at P ~ 10^4..10^6 lose ~1e-11.
std::vector<double> log_overlap_pmfs(std::uint32_t K, std::uint32_t P) {
  std::vector<double> out(K + 1);
  double anchor = 0.0;
  for (std::uint32_t i = 0; i < K; ++i) anchor += std::log1p(-static_cast<double>(K) / (static_cast<double>(P) - i));
  out[0] = anchor;
  for (std::uint32_t u = 0; u < K; ++u) {
    const double num = static_cast<double>(K - u) * (K - u);
    const double den = (u + 1.0) * (static_cast<double>(P) - 2.0 * K + u + 1.0);
    out[u + 1] = out[u] + std::log(num / den);
  }
  return out;
}

/// Neumaier-compensated sum of values sorted ascending.
double compensated_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  double carry = 0.0;
  for (double x : terms) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace

double exact_overlap_pmf(std::uint32_t K, std::uint32_t P, std::uint32_t u) {
  require_overlap_regime(K, P);
  if (u > K) {
    throw std::invalid_argument("overlap u = " + std::to_string(u) + " exceeds ring size K = " + std::to_string(K));
  }
  return std::exp(log_overlap_pmfs(K, P)[u]);
}

double exact_s_probability(std::uint32_t K, std::uint32_t P, std::uint32_t q) {
  require_overlap_regime(K, P);
  if (q < 1 || q > K) {
    throw std::invalid_argument("overlap requirement q = " + std::to_string(q) + " must lie in [1, K = " +
                                std::to_string(K) + "]");
  }
  const std::vector<double> logs = log_overlap_pmfs(K, P);
  std::vector<double> terms;
  terms.reserve(K - q + 1);
  for (std::uint32_t u = q; u <= K; ++u) terms.push_back(std::exp(logs[u]));
  return std::min(1.0, compensated_sum(std::move(terms)));
}

double exact_t_probability(std::uint32_t K, std::uint32_t P, std::uint32_t q, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("channel probability p must lie in [0, 1]");
  return p * exact_s_probability(K, P, q);
}

double exact_t_probability(const ModelParams& params) {
  params.validate();
  return exact_t_probability(params.K, params.P, params.q, params.p);
}

double asymptotic_s(std::uint32_t K, std::uint32_t P, std::uint32_t q) {
  const double ratio = static_cast<double>(K) * K / P;
  return std::exp(q * std::log(ratio) - log_factorial(q));
}

double ScalingPoint::reconstruct_t() const {
  const long double ln_n = std::log(static_cast<long double>(n));
  return static_cast<double>((ln_n + (k - 1.0L) * std::log(ln_n) + alpha) / n);
}

ScalingPoint scaling_alpha(std::uint32_t n, std::uint32_t k, double t) {
  if (n < 3) throw std::invalid_argument("scaling law needs n >= 3 so that ln ln n > 0, got n = " + std::to_string(n));
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("edge probability t must lie in [0, 1]");
  const long double ln_n = std::log(static_cast<long double>(n));
  ScalingPoint pt{n, k, t, 0.0};
  pt.alpha = static_cast<double>(static_cast<long double>(n) * t - ln_n - (k - 1.0L) * std::log(ln_n));
  return pt;
}

double predicted_k_connectivity(double alpha, std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  // exp(-exp(-alpha - ln (k-1)!)) keeps large (k-1)! out of overflow
  return std::exp(-std::exp(-alpha - log_factorial(k - 1)));
}

double predicted_min_degree_at_least_k(double alpha, std::uint32_t k) { return predicted_k_connectivity(alpha, k); }

double er_k_connectivity_prediction(std::uint32_t n, double p, std::uint32_t k) {
  return predicted_k_connectivity(scaling_alpha(n, k, p).alpha, k);
}

double critical_edge_probability(std::uint32_t n, std::uint32_t k) {
  if (n < 3) throw std::invalid_argument("threshold needs n >= 3, got n = " + std::to_string(n));
  const double ln_n = std::log(static_cast<double>(n));
  return (ln_n + (k - 1.0) * std::log(ln_n)) / n;
}

KStarResult k_star(std::uint32_t n, std::uint32_t P, std::uint32_t q, double p, std::uint32_t k) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  KStarResult res;
  res.threshold = critical_edge_probability(n, k);
  res.extended_rule = k > 1;
  double previous = 0.0;
  for (std::uint32_t K = q; 2ull * K <= P; ++K) {
    const double t = exact_t_probability(K, P, q, p);
    if (t > res.threshold) {
      res.k_star = K;
      res.t_at = t;
      res.t_below = previous;
      return res;
    }
    previous = t;
  }
  throw UnsupportedRegime("no ring size K with 2K <= P = " + std::to_string(P) +
                          " pushes t above the threshold " + std::to_string(res.threshold));
}

double poisson_degree_mean(std::uint32_t n, double t, std::uint32_t h) {
  const double mean_degree = n * t;
  if (h == 0) return n * std::exp(-mean_degree);
  if (mean_degree == 0.0) return 0.0;
  return std::exp(std::log(static_cast<double>(n)) + h * std::log(mean_degree) - mean_degree - log_factorial(h));
}

double coupling_x(std::uint32_t n, std::uint32_t K, std::uint32_t P) {
  if (n < 2) throw std::invalid_argument("coupling_x needs n >= 2");
  if (P == 0) throw std::invalid_argument("pool size P must be positive");
  const double three_ln_n = 3.0 * std::log(static_cast<double>(n));
  if (K <= three_ln_n) {
    throw UnsupportedRegime("coupling needs K > 3 ln n = " + std::to_string(three_ln_n) + ", got K = " +
                            std::to_string(K));
  }
  return (static_cast<double>(K) / P) * (1.0 - std::sqrt(three_ln_n / K));
}

double coupling_y(std::uint32_t P, double x, std::uint32_t q) {
  if (q < 1) throw std::invalid_argument("q must be >= 1");
  const double base = P * x * x;
  if (base == 0.0) return 0.0;
  return std::exp(q * std::log(base) - log_factorial(q));
}

}  // namespace qcomp::theory
