#include "qecsense/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qecsense::linalg {

template <class T>
Matrix<T> Matrix<T>::from_rows(const std::vector<std::vector<T>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_)
      throw Error(ErrorKind::DimensionMismatch, "ragged rows in matrix literal");
    std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.cols_);
  }
  return m;
}

template <class T>
std::vector<T> Matrix<T>::column(std::size_t j) const {
  std::vector<T> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

template <class T>
std::vector<T> Matrix<T>::diag() const {
  std::vector<T> out(std::min(rows_, cols_));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, i);
  return out;
}

template <class T>
void Matrix<T>::set_column(std::size_t j, std::span<const T> values) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

template <class T>
Matrix<T> Matrix<T>::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj_of((*this)(i, j));
  return out;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

template <class T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorKind::DimensionMismatch, "matrix addition shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw Error(ErrorKind::DimensionMismatch, "matrix subtraction shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator*=(T scale) {
  for (auto& x : data_) x *= scale;
  return *this;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> x) {
  if (a.cols() != x.size())
    throw Error(ErrorKind::DimensionMismatch, "matrix-vector shape mismatch");
  std::vector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

DenseMatrix to_complex(const RealMatrix& m) {
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

template <class T>
double frobenius_norm(const Matrix<T>& m) {
  double acc = 0.0;
  for (const auto& x : m.data()) acc += std::norm(x);
  return std::sqrt(acc);
}

template <class T>
double max_abs(const Matrix<T>& m) {
  double best = 0.0;
  for (const auto& x : m.data()) best = std::max(best, std::abs(x));
  return best;
}

template <class T>
T trace(const Matrix<T>& m) {
  T acc{};
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) acc += m(i, i);
  return acc;
}

template <class T>
T hs_inner(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "inner product shape mismatch");
  T acc{};
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) acc += conj_of(da[k]) * db[k];
  return acc;
}

template <class T>
double hermiticity_defect(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorKind::NotSquare, "hermiticity of non-square matrix");
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) acc += std::norm(m(i, j) - conj_of(m(j, i)));
  return std::sqrt(acc);
}

template <class T>
Matrix<T> outer(std::span<const T> u, std::span<const T> v) {
  Matrix<T> out(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * conj_of(v[j]);
  return out;
}

template <class T>
T inner(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "inner product length");
  T acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += conj_of(u[i]) * v[i];
  return acc;
}

template <class T>
double norm2(std::span<const T> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(ErrorKind::DimensionMismatch, "dot product length");
  return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

double norm1(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

double norm_inf(std::span<const double> v) {
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

namespace {

// One Jacobi rotation annihilating a(p,q). For complex input the (p,q) entry
// is first made real by a diagonal phase on index q.
template <class T>
void jacobi_rotate(Matrix<T>& a, Matrix<T>& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.rows();
  double b;
  if constexpr (is_complex_v<T>) {
    const T apq = a(p, q);
    b = std::abs(apq);
    const T phase = apq / b;
    const T phase_c = std::conj(phase);
    for (std::size_t k = 0; k < n; ++k) {
      a(k, q) *= phase_c;
      v(k, q) *= phase_c;
    }
    for (std::size_t k = 0; k < n; ++k) a(q, k) *= phase;
  } else {
    b = a(p, q);
  }
  const double app = real_of(a(p, p));
  const double aqq = real_of(a(q, q));
  const double tau = (aqq - app) / (2.0 * b);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  for (std::size_t k = 0; k < n; ++k) {
    const T akp = a(k, p);
    const T akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
    const T vkp = v(k, p);
    const T vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const T apk = a(p, k);
    const T aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = T{};
  a(q, p) = T{};
  a(p, p) = real_of(a(p, p));
  a(q, q) = real_of(a(q, q));
}

}  // namespace

template <class T>
EigenDecomposition<T> eigh(const Matrix<T>& input) {
  if (!input.is_square() || input.empty())
    throw Error(ErrorKind::NotSquare, "eigh requires a non-empty square matrix");
  const double scale = frobenius_norm(input);
  const double defect = hermiticity_defect(input);
  if (defect > 1e-12 * scale)
    throw Error(ErrorKind::NotHermitian,
                "eigh input deviates from its adjoint by " + std::to_string(defect));

  const std::size_t n = input.rows();
  Matrix<T> a = input;
  // Symmetrize so the rotations act on an exactly Hermitian matrix.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = real_of(a(i, i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const T avg = 0.5 * (a(i, j) + conj_of(a(j, i)));
      a(i, j) = avg;
      a(j, i) = conj_of(avg);
    }
  }
  Matrix<T> v = Matrix<T>::identity(n);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::norm(a(i, j));
    off = std::sqrt(2.0 * off);
    if (off <= 1e-15 * scale || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        // Skip entries already negligible against both diagonal entries.
        const double dp = std::abs(real_of(a(p, p)));
        const double dq = std::abs(real_of(a(q, q)));
        if (sweep > 3 && mag < 1e-18 * std::max(dp, dq)) {
          a(p, q) = T{};
          a(q, p) = T{};
          continue;
        }
        jacobi_rotate(a, v, p, q);
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return real_of(a(i, i)) < real_of(a(j, j));
  });

  EigenDecomposition<T> out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix<T>(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = real_of(a(order[k], order[k]));
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

template <class T>
std::optional<std::vector<T>> try_solve_linear(const Matrix<T>& a, std::span<const T> b) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "solve_linear requires a square matrix");
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "rhs length mismatch");
  const std::size_t n = a.rows();
  Matrix<T> lu = a;
  std::vector<T> x(b.begin(), b.end());
  const double tol = 1e-12 * max_abs(a);
  if (n == 0) return x;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double mag = std::abs(lu(r, col));
      if (mag > best) {
        best = mag;
        piv = r;
      }
    }
    if (best <= tol || best == 0.0) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
      std::swap(x[col], x[piv]);
    }
    const T inv = T{1} / lu(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const T f = lu(r, col) * inv;
      if (f == T{}) continue;
      for (std::size_t j = col; j < n; ++j) lu(r, j) -= f * lu(col, j);
      x[r] -= f * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    T acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lu(i, j) * x[j];
    x[i] = acc / lu(i, i);
  }
  return x;
}

template <class T>
std::vector<T> solve_linear(const Matrix<T>& a, std::span<const T> b) {
  auto x = try_solve_linear(a, b);
  if (!x) throw Error(ErrorKind::Singular, "pivot below relative tolerance 1e-12");
  return *std::move(x);
}

template <class T>
std::vector<std::vector<T>> orthonormalize(std::span<const std::vector<T>> basis,
                                           double rank_tol) {
  std::vector<std::vector<T>> out;
  if (basis.empty()) return out;
  const std::size_t dim = basis.front().size();
  double largest = 0.0;
  for (const auto& v : basis) {
    if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "basis vectors differ in length");
    largest = std::max(largest, norm2<T>(v));
  }
  const double drop = rank_tol * largest;
  for (const auto& v : basis) {
    std::vector<T> w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) {
        const T c = inner<T>(q, w);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * q[i];
      }
    }
    const double nw = norm2<T>(w);
    if (nw <= drop || nw == 0.0) continue;
    for (auto& x : w) x /= nw;
    out.push_back(std::move(w));
  }
  return out;
}

template <class T>
Matrix<T> subspace_projector(std::span<const std::vector<T>> basis, std::size_t dim,
                             double rank_tol) {
  Matrix<T> proj(dim, dim);
  for (const auto& q : orthonormalize(basis, rank_tol)) {
    if (q.size() != dim) throw Error(ErrorKind::DimensionMismatch, "basis dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) proj(i, j) += q[i] * conj_of(q[j]);
  }
  return proj;
}

template <class T>
std::optional<Matrix<T>> polar_unitary(const Matrix<T>& b, double tol, double rank_tol) {
  if (!b.is_square()) throw Error(ErrorKind::NotSquare, "polar_unitary requires a square matrix");
  if (frobenius_norm(b) <= tol) return std::nullopt;
  const std::size_t n = b.rows();
  const Matrix<T> gram = b.adjoint() * b;
  const auto eig = eigh(gram);
  const double top = eig.eigenvalues.back();
  Matrix<T> inv_sqrt(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double mu = eig.eigenvalues[k];
    if (mu <= rank_tol * top) continue;
    const double w = 1.0 / std::sqrt(mu);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        inv_sqrt(i, j) += w * eig.eigenvectors(i, k) * conj_of(eig.eigenvectors(j, k));
  }
  return b * inv_sqrt;
}

#define QECSENSE_INSTANTIATE(T)                                                              \
  template class Matrix<T>;                                                                  \
  template Matrix<T> operator*(const Matrix<T>&, const Matrix<T>&);                          \
  template std::vector<T> operator*(const Matrix<T>&, std::span<const T>);                   \
  template double frobenius_norm(const Matrix<T>&);                                          \
  template double max_abs(const Matrix<T>&);                                                 \
  template T trace(const Matrix<T>&);                                                        \
  template T hs_inner(const Matrix<T>&, const Matrix<T>&);                                   \
  template double hermiticity_defect(const Matrix<T>&);                                      \
  template Matrix<T> outer(std::span<const T>, std::span<const T>);                          \
  template T inner(std::span<const T>, std::span<const T>);                                  \
  template double norm2(std::span<const T>);                                                 \
  template EigenDecomposition<T> eigh(const Matrix<T>&);                                     \
  template std::optional<std::vector<T>> try_solve_linear(const Matrix<T>&,                  \
                                                          std::span<const T>);               \
  template std::vector<T> solve_linear(const Matrix<T>&, std::span<const T>);                \
  template std::vector<std::vector<T>> orthonormalize(std::span<const std::vector<T>>,       \
                                                      double);                               \
  template Matrix<T> subspace_projector(std::span<const std::vector<T>>, std::size_t, double); \
  template std::optional<Matrix<T>> polar_unitary(const Matrix<T>&, double, double);

QECSENSE_INSTANTIATE(double)
QECSENSE_INSTANTIATE(Complex)

#undef QECSENSE_INSTANTIATE

}  // namespace qecsense::linalg
