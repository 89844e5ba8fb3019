#pragma once

// Exact intersection theory on a finite-rank lattice: divisor classes, the
// intersection pairing, Gram submatrices, negative-definiteness, and exact
// linear solves. Nothing here touches floating point.

#include "pklt/error.hpp"
#include "pklt/rational.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pklt {

/// Dense row-major matrix of rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  std::vector<Rational> operator*(std::span<const Rational> v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector size mismatch");
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// A numerical class in the lattice named `lattice`.
struct DivisorClass {
  std::string lattice;
  std::vector<Rational> coeffs;

  std::size_t rank() const { return coeffs.size(); }
  bool is_zero() const {
    for (const auto& c : coeffs)
      if (c != 0) return false;
    return true;
  }

  DivisorClass& operator+=(const DivisorClass& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  DivisorClass& operator-=(const DivisorClass& o) {
    check_same(o);
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  DivisorClass& operator*=(const Rational& r) {
    for (auto& c : coeffs) c *= r;
    return *this;
  }
  friend DivisorClass operator+(DivisorClass a, const DivisorClass& b) { return a += b; }
  friend DivisorClass operator-(DivisorClass a, const DivisorClass& b) { return a -= b; }
  friend DivisorClass operator*(const Rational& r, DivisorClass a) { return a *= r; }
  friend DivisorClass operator-(DivisorClass a) { return a *= Rational(-1); }
  bool operator==(const DivisorClass&) const = default;

  void check_same(const DivisorClass& o) const {
    if (lattice != o.lattice || coeffs.size() != o.coeffs.size()) throw LatticeMismatch(lattice, o.lattice);
  }
};

/// Symmetric bilinear form on a named lattice, with labels for its basis.
struct IntersectionForm {
  std::string lattice;
  std::vector<std::string> basis;
  Matrix gram;

  std::size_t rank() const { return gram.rows(); }
  DivisorClass zero() const { return {lattice, std::vector<Rational>(rank())}; }
  DivisorClass basis_vector(std::size_t i) const {
    DivisorClass c = zero();
    c.coeffs.at(i) = 1;
    return c;
  }
  bool operator==(const IntersectionForm&) const = default;
};

inline void require_in_lattice(const DivisorClass& c, const IntersectionForm& form) {
  if (c.lattice != form.lattice || c.rank() != form.rank()) throw LatticeMismatch(c.lattice, form.lattice);
}

/// aᵀ·G·b.
inline Rational intersect(const DivisorClass& a, const DivisorClass& b, const IntersectionForm& form) {
  require_in_lattice(a, form);
  require_in_lattice(b, form);
  Rational sum = 0;
  for (std::size_t i = 0; i < form.rank(); ++i) {
    if (a.coeffs[i] == 0) continue;
    Rational row = 0;
    for (std::size_t j = 0; j < form.rank(); ++j) row += form.gram(i, j) * b.coeffs[j];
    sum += a.coeffs[i] * row;
  }
  return sum;
}

inline Matrix gram_submatrix(std::span<const DivisorClass> curves, const IntersectionForm& form) {
  if (curves.empty()) throw std::invalid_argument("gram_submatrix: empty curve list");
  Matrix m(curves.size(), curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i)
    for (std::size_t j = i; j < curves.size(); ++j) m(i, j) = m(j, i) = intersect(curves[i], curves[j], form);
  return m;
}

/// Sylvester's criterion on leading principal minors. Gaussian elimination
/// without pivoting produces pivots p_k = minor_k / minor_{k-1}, so the
/// minors alternate in sign starting negative iff every pivot is negative.
inline bool is_negative_definite(const Matrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("is_negative_definite: matrix is not symmetric");
  const std::size_t n = m.rows();
  Matrix a = m;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) >= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational factor = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
    }
  }
  return true;
}

/// Solves m·x = rhs exactly. Rows are scaled to integers, then eliminated
/// with Bareiss' fraction-free scheme; only the back substitution divides.
inline std::vector<Rational> solve_exact(const Matrix& m, std::span<const Rational> rhs) {
  if (!m.square()) throw std::invalid_argument("solve_exact: matrix is not square");
  if (rhs.size() != m.rows()) throw std::invalid_argument("solve_exact: rhs size mismatch");
  const std::size_t n = m.rows();

  std::vector<std::vector<Integer>> aug(n, std::vector<Integer>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    Integer scale = 1;
    auto fold = [&scale](const Rational& r) {
      const Integer& d = boost::multiprecision::denominator(r);
      scale = scale / boost::multiprecision::gcd(scale, d) * d;
    };
    for (std::size_t j = 0; j < n; ++j) fold(m(i, j));
    fold(rhs[i]);
    for (std::size_t j = 0; j <= n; ++j) {
      const Rational& r = j < n ? m(i, j) : rhs[i];
      aug[i][j] = boost::multiprecision::numerator(r) * (scale / boost::multiprecision::denominator(r));
    }
  }

  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && aug[pivot][k] == 0) ++pivot;
    if (pivot == n) throw SingularMatrix("solve_exact: singular matrix");
    if (pivot != k) std::swap(aug[pivot], aug[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) aug[i][j] = (aug[i][j] * aug[k][k] - aug[i][k] * aug[k][j]) / prev;
      aug[i][k] = 0;
    }
    prev = aug[k][k];
  }

  std::vector<Rational> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational acc(aug[ii][n]);
    for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(aug[ii][j]) * x[j];
    x[ii] = acc / Rational(aug[ii][ii]);
  }
  return x;
}

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  bool operator==(const Inertia&) const = default;
};

/// Signature by symmetric congruence (no eigenvalues). When every remaining
/// diagonal entry vanishes but some a_ij does not, adding basis vector j to
/// basis vector i creates the nonzero diagonal entry 2·a_ij.
inline Inertia inertia(const Matrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("inertia: matrix is not symmetric");
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);

  Inertia out;
  while (!a.empty()) {
    const std::size_t n = a.size();
    std::size_t p = n;
    for (std::size_t i = 0; i < n && p == n; ++i)
      if (a[i][i] != 0) p = i;
    if (p == n) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (a[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) {
        out.zero += n;
        break;
      }
      for (std::size_t k = 0; k < n; ++k) a[pi][k] += a[pj][k];
      for (std::size_t k = 0; k < n; ++k) a[k][pi] += a[k][pj];
      p = pi;
    }
    const Rational pivot = a[p][p];
    (pivot > 0 ? out.positive : out.negative) += 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == p || a[i][p] == 0) continue;
      Rational factor = a[i][p] / pivot;
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= factor * a[p][j];
    }
    a.erase(a.begin() + static_cast<std::ptrdiff_t>(p));
    for (auto& row : a) row.erase(row.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return out;
}

}  // namespace pklt
