#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rphl {

using Complex = std::complex<double>;
using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXc = Matrix<Complex>;
using MatrixXr = Matrix<double>;
using VectorXc = Vector<Complex>;
using VectorXr = Vector<double>;

/// Hard ceiling on the total Hilbert-space dimension of any dense operator.
inline constexpr Index kHardDimensionLimit = 8192;

/// Numeric tolerances shared by checks, reports and tests.
namespace tol {
inline constexpr double kFourierImag = 1e-12;
inline constexpr double kConditionA2 = 1e-12;
inline constexpr double kCar = 1e-13;
inline constexpr double kHoleParticle = 1e-12;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kUnitary = 1e-12;
inline constexpr double kConjugation = 1e-11;  // relative to max|H|
inline constexpr double kSpectrum = 1e-10;
inline constexpr double kBound = 1e-9;
inline constexpr double kDomination = 1e-9;
inline constexpr double kCorollary = 1e-9;
inline constexpr double kHalfFillingPure = 1e-10;
inline constexpr double kHalfFillingPhoton = 1e-9;
inline constexpr double kEuclidean = 1e-8;
inline constexpr double kDecoupling = 1e-10;
inline constexpr double kDegeneracy = 1e-9;
inline constexpr double kReconstruction = 1e-10;
}  // namespace tol

/// Configuration or argument violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Total Hilbert dimension exceeds the active guard.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed (sign convention, eigensolver, ...).
class NumericalCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Active dimension limit: kHardDimensionLimit, lowered by RPHL_MAX_DIM if set.
Index max_dimension();

/// Throws ResourceGuardError if `dim` exceeds max_dimension().
void check_dimension(Index dim, const std::string& what);

// Small expression-friendly helpers.

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return max_abs(a - b);
}

template <typename Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.adjoint());
}

template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto n = m.rows();
  return max_abs(m * m.adjoint() - Matrix<Scalar>::Identity(n, n));
}

/// Kronecker product a ⊗ b; row index of the result is i_a * rows(b) + i_b.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.template cast<Scalar>();
    }
  }
  return out;
}

/// Anticommutator {a, b}.
template <typename DerivedA, typename DerivedB>
auto anticommutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a * b + b * a).eval();
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a * b - b * a).eval();
}

}  // namespace rphl
