#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace replidyn {

// Thrown when an iteration diverges, fails to converge, or produces values
// outside the representable/meaningful range.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shannon entropy -sum_i w_i ln w_i in nats, with 0 ln 0 = 0. Entries below
// zero are treated as zero; the input is not renormalized.
double shannon_entropy(const Eigen::VectorXd& weights);

// Orthonormal basis of the sum-zero subspace {v : sum_i v_i = 0} of R^n,
// returned as the columns of an n x (n-1) matrix.
Eigen::MatrixXd sum_zero_basis(Eigen::Index n);

// Deterministic stream splitter used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace replidyn
