// spin_algebra.hpp — collective spin operators on the symmetric Dicke basis
#pragma once

#include <Eigen/Dense>

#include "squeezedyn/errors.hpp"

namespace squeezedyn {

// Total spin j = N/2 of N two-level ions, stored as 2j so that half-integer
// values stay exact. Basis ordering is m = -j ... +j (ascending) everywhere.
class SpinQuantum {
 public:
  explicit SpinQuantum(int two_j);
  static SpinQuantum from_j(double j);
  static SpinQuantum for_ions(int n_ions);

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  int dim() const { return two_j_ + 1; }
  int n_ions() const { return two_j_; }
  bool integer_j() const { return two_j_ % 2 == 0; }

  // m value at basis index s = 0 ... 2j
  double m_at(int s) const { return -j() + s; }
  // basis index of a given m; throws std::domain_error if m is not a valid
  // magnetic quantum number for this j
  int index_of_m(double m) const;

 private:
  int two_j_;
};

struct SpinMatrices {
  Eigen::MatrixXcd jx, jy, jz, jplus, jminus;
};

// Matrix element of J+ between |j,m> and |j,m+1>: sqrt(j(j+1) - m(m+1)).
// Zero at m = j; throws std::domain_error for m outside [-j, j] or when
// j, m are not compatible half-integers.
double ladder_element(double j, double m);

SpinMatrices build_spin_operators(const SpinQuantum& q);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};

// <op> and Var(op) for a normalized pure state or a unit-trace density
// matrix. The operator must be Hermitian within 1e-12; the variance is
// clamped to zero when roundoff drives it slightly negative.
MeanVariance mean_and_variance(const Eigen::MatrixXcd& op,
                               const Eigen::VectorXcd& state);
MeanVariance mean_and_variance(const Eigen::MatrixXcd& op,
                               const Eigen::MatrixXcd& rho);

}  // namespace squeezedyn
