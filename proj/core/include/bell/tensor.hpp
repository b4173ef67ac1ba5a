#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bell {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

// Tolerances enforced by the library, exposed so callers and tests can use
// the exact same values.
namespace tolerance {
inline constexpr double hermitian = 1e-10;
inline constexpr double eig_residual = 1e-8;
inline constexpr double orthonormal = 1e-10;
inline constexpr double unitary = 1e-10;
inline constexpr double projector = 1e-10;
inline constexpr double state_norm = 1e-12;
inline constexpr double no_signalling = 1e-10;
inline constexpr double law_normalization = 1e-10;
inline constexpr double pi_normalization = 1e-12;
}  // namespace tolerance

struct NotHermitian : std::runtime_error {
  explicit NotHermitian(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major complex matrix. Small and value-semantic: every quantum
// construction in this library is at most 8x8 explicit (qudit unitaries go up
// to 128x128); anything larger is handled through implicit actions.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), e_(rows * cols, cplx{0.0, 0.0}) {}

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const ComplexVector& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  const ComplexVector& entries() const { return e_; }
  ComplexVector& entries() { return e_; }

  ComplexMatrix dagger() const;
  double max_abs() const;
  bool is_hermitian(double tol = tolerance::hermitian) const;
  bool is_unitary(double tol = tolerance::unitary) const;
  bool all_finite() const;

  ComplexVector apply(const ComplexVector& v) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  ComplexVector e_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns, orthonormal, same order
};

// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Throws NotHermitian
// if the input fails the symmetry check and NoConvergence if the sweep cap is
// reached before the off-diagonal mass is annihilated.
EigDecomposition hermitian_eig(const ComplexMatrix& m);

struct EigPair {
  double value;
  ComplexVector vector;
};

// Largest (algebraic) eigenvalue of a Hermitian operator given only its
// action, via shifted power iteration. The shift makes the top eigenvalue
// strictly dominant even when the spectrum is symmetric around zero.
EigPair largest_eig(const std::function<void(const cplx*, cplx*)>& op_apply, std::size_t dim);

}  // namespace bell
