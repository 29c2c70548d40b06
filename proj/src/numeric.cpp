#include "replidyn/numeric.hpp"

#include <cmath>

namespace replidyn {

double shannon_entropy(const Eigen::VectorXd& weights) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double w = weights(i);
    if (w > 0.0) s -= w * std::log(w);
  }
  return s;
}

Eigen::MatrixXd sum_zero_basis(Eigen::Index n) {
  // Complete the normalized ones vector to an orthonormal basis; the
  // remaining columns span the sum-zero subspace.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - 1);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace replidyn
