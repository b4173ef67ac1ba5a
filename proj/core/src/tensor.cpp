#include "bell/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bell {

ComplexMatrix ComplexMatrix::dagger() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : e_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  ComplexMatrix p = dagger() * (*this);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      cplx want = (i == j) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      if (std::abs(p(i, j) - want) > tol) return false;
    }
  return true;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(e_.begin(), e_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexVector ComplexMatrix::apply(const ComplexVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
  ComplexVector r(rows_, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < rows_; ++i) {
    cplx acc{0.0, 0.0};
    const cplx* row = e_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
    r[i] = acc;
  }
  return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : e_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  ComplexMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia)
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      cplx s = a(ia, ja);
      if (s == cplx{0.0, 0.0}) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
          r(ia * b.rows() + ib, ja * b.cols() + jb) = s * b(ib, jb);
    }
  return r;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw NotHermitian("hermitian_eig: matrix not square");
  if (!m.is_hermitian()) throw NotHermitian("hermitian_eig: matrix not Hermitian within 1e-10");

  const std::size_t n = m.rows();
  ComplexMatrix a = m;
  ComplexMatrix v = ComplexMatrix::identity(n);

  const int max_sweeps = 100;
  const double target = 1e-14 * std::max(1.0, m.max_abs()) * static_cast<double>(n);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        cplx apq = a(p, q);
        double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        // Unitary plane rotation J with J(p,p)=c, J(p,q)=-conj(s), J(q,p)=s,
        // J(q,q)=c chosen so that (J^H A J)(p,q) = 0.
        double app = a(p, p).real();
        double aqq = a(q, q).real();
        cplx phase = apq / mag;
        double theta = 0.5 * std::atan2(2.0 * mag, app - aqq);
        double c = std::cos(theta);
        cplx s = std::sin(theta) * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + s * akq;
          a(k, q) = -std::conj(s) * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + std::conj(s) * aqk;
          a(q, k) = -s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + s * vkq;
          v(k, q) = -std::conj(s) * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == max_sweeps) throw NoConvergence("hermitian_eig: Jacobi sweep cap reached");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

  EigDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  if (!out.eigenvectors.all_finite()) throw NoConvergence("hermitian_eig: non-finite result");
  return out;
}

EigPair largest_eig(const std::function<void(const cplx*, cplx*)>& op_apply, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("largest_eig: empty operator");

  // Deterministic start with nonzero overlap against any fixed vector is not
  // guaranteed, so mix a constant component with a pseudo-random one.
  ComplexVector v(dim), w(dim);
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < dim; ++i) {
    s ^= s << 13; s ^= s >> 7; s ^= s << 17;
    double r1 = 0.5 + static_cast<double>(s % 1000003) / 2000006.0;
    v[i] = cplx{1.0 + r1, 0.1 * r1};
  }
  auto normalize = [](ComplexVector& x) {
    double n2 = 0.0;
    for (const auto& z : x) n2 += std::norm(z);
    double n = std::sqrt(n2);
    for (auto& z : x) z /= n;
    return n;
  };
  normalize(v);

  // Spectral bound estimate for the positivity shift.
  double bound = 0.0;
  for (int it = 0; it < 8; ++it) {
    op_apply(v.data(), w.data());
    double n2 = 0.0;
    for (const auto& z : w) n2 += std::norm(z);
    bound = std::max(bound, std::sqrt(n2));
    std::swap(v, w);
    normalize(v);
  }
  const double shift = bound * 1.5 + 1.0;

  const long max_iter = 200000;
  double lambda = 0.0;
  for (long it = 0; it < max_iter; ++it) {
    op_apply(v.data(), w.data());
    // Rayleigh quotient of the unshifted operator.
    cplx rq{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) rq += std::conj(v[i]) * w[i];
    lambda = rq.real();
    double res2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) res2 += std::norm(w[i] - lambda * v[i]);
    if (std::sqrt(res2) <= tolerance::eig_residual * std::max(std::abs(lambda), 1e-30)) {
      return EigPair{lambda, v};
    }
    for (std::size_t i = 0; i < dim; ++i) w[i] += shift * v[i];
    std::swap(v, w);
    normalize(v);
  }
  throw NoConvergence("largest_eig: iteration cap reached");
}

}  // namespace bell
