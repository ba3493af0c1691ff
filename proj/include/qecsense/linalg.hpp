#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qecsense/error.hpp"

namespace qecsense::linalg {

using Complex = std::complex<double>;

template <class T>
inline constexpr bool is_complex_v = false;
template <>
inline constexpr bool is_complex_v<Complex> = true;

inline double conj_of(double x) { return x; }
inline Complex conj_of(const Complex& z) { return std::conj(z); }
inline double real_of(double x) { return x; }
inline double real_of(const Complex& z) { return z.real(); }

// Dense row-major matrix. Real matrices are Matrix<double>; everything that
// touches quantum states uses the complex instantiation.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static Matrix diagonal(std::span<const T> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::vector<T> column(std::size_t j) const;
  std::vector<T> diag() const;
  void set_column(std::size_t j, std::span<const T> values);

  Matrix adjoint() const;
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(T scale);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using DenseMatrix = Matrix<Complex>;
using RealMatrix = Matrix<double>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);

template <class T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> x);

template <class T>
std::vector<T> apply(const Matrix<T>& a, std::span<const T> x) {
  return a * x;
}

DenseMatrix to_complex(const RealMatrix& m);

template <class T>
double frobenius_norm(const Matrix<T>& m);

// Largest entry magnitude; equals the operator norm for diagonal matrices.
template <class T>
double max_abs(const Matrix<T>& m);

template <class T>
T trace(const Matrix<T>& m);

template <class T>
Matrix<T> commutator(const Matrix<T>& a, const Matrix<T>& b) {
  return a * b - b * a;
}

// Hilbert-Schmidt inner product tr(A^dagger B).
template <class T>
T hs_inner(const Matrix<T>& a, const Matrix<T>& b);

template <class T>
double hermiticity_defect(const Matrix<T>& m);

// u v^dagger
template <class T>
Matrix<T> outer(std::span<const T> u, std::span<const T> v);

template <class T>
T inner(std::span<const T> u, std::span<const T> v);

template <class T>
double norm2(std::span<const T> v);

double dot(std::span<const double> u, std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);

template <class T>
struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix<T> eigenvectors;           // orthonormal columns
};

// Cyclic Jacobi eigensolver for real symmetric or complex Hermitian input.
template <class T>
EigenDecomposition<T> eigh(const Matrix<T>& a);

// LU with partial pivoting. Returns nullopt when a pivot falls below
// 1e-12 of the largest entry of A.
template <class T>
std::optional<std::vector<T>> try_solve_linear(const Matrix<T>& a, std::span<const T> b);

template <class T>
std::vector<T> solve_linear(const Matrix<T>& a, std::span<const T> b);

// Modified Gram-Schmidt (two passes). Vectors whose residual norm falls below
// rank_tol times the largest input norm are dropped.
template <class T>
std::vector<std::vector<T>> orthonormalize(std::span<const std::vector<T>> basis,
                                           double rank_tol = 1e-10);

template <class T>
Matrix<T> subspace_projector(std::span<const std::vector<T>> basis, std::size_t dim,
                             double rank_tol = 1e-10);

// Partial isometry U with B = U sqrt(B^dagger B). Returns nullopt ("Zero")
// when ||B||_F <= tol. Singular values below sqrt(rank_tol) of the largest
// are treated as zero.
template <class T>
std::optional<Matrix<T>> polar_unitary(const Matrix<T>& b, double tol, double rank_tol = 1e-10);

}  // namespace qecsense::linalg
