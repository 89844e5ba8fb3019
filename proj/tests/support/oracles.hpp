#pragma once

// Reference computations that share no code path with the library solvers:
// cofactor and full-pivot determinants, Gauss-Jordan with full pivoting,
// subset enumeration for Zariski decompositions, and a direct discrepancy
// solve.

#include "pklt/potential.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

using pklt::Rational;
using Mat = std::vector<std::vector<Rational>>;

inline Mat to_mat(const pklt::Matrix& m) {
  Mat out(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

/// Laplace expansion along the first row.
inline Rational cofactor_det(const Mat& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  Rational det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    Mat minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    Rational term = m[0][c] * cofactor_det(minor);
    det += (c % 2 == 0) ? term : Rational(-term);
  }
  return det;
}

/// Determinant by elimination with full pivoting.
inline Rational pivot_det(Mat a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = n, pc = n;
    for (std::size_t i = k; i < n && pr == n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (a[i][j] != 0) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == n) return 0;
    if (pr != k) {
      std::swap(a[k], a[pr]);
      det = -det;
    }
    if (pc != k) {
      for (auto& row : a) std::swap(row[k], row[pc]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

/// Sylvester: M negative definite iff the k-th leading minor has sign (−1)^k.
inline bool negative_definite(const Mat& m) {
  const std::size_t n = m.size();
  for (std::size_t k = 1; k <= n; ++k) {
    Mat lead(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead[i][j] = m[i][j];
    Rational d = pivot_det(lead);
    if (k % 2 == 1 ? d >= 0 : d <= 0) return false;
  }
  return true;
}

/// Gauss-Jordan with full pivoting; nullopt when singular.
inline std::optional<std::vector<Rational>> solve(Mat a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  std::vector<std::size_t> col(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = n, pc = n;
    for (std::size_t i = k; i < n && pr == n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (a[i][j] != 0) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == n) return std::nullopt;
    std::swap(a[k], a[pr]);
    std::swap(b[k], b[pr]);
    for (auto& row : a) std::swap(row[k], row[pc]);
    std::swap(col[k], col[pc]);
    Rational p = a[k][k];
    for (auto& v : a[k]) v /= p;
    b[k] /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k] == 0) continue;
      Rational f = a[i][k];
      for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[col[i]] = b[i];
  return x;
}

inline Rational dot(const pklt::DivisorClass& a, const pklt::DivisorClass& b, const pklt::Matrix& g) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) s += a.coeffs[i] * g(i, j) * b.coeffs[j];
  return s;
}

struct Decomposition {
  std::map<std::string, Rational> negative;  // id → coefficient, all > 0
  std::vector<Rational> positive;
};

/// Every subset S of the catalog whose solution satisfies the Zariski
/// conditions: gram(S) negative definite, N > 0 on S, P·C = 0 on S, P·C ≥ 0
/// on the catalog. A correct solver agrees with the unique such subset.
inline std::vector<Decomposition> brute_force_zariski(const pklt::SurfaceModel& model, int level, const pklt::DivisorClass& d) {
  const auto& cat = model.catalog(level);
  const auto& g = model.form(level).gram;
  const std::size_t n = cat.size();
  // Sylvester along nested leading minors: S is negative definite iff S minus
  // its last element is, and det gram(S) has sign (−1)^|S|.
  Mat full(n, std::vector<Rational>(n));
  std::vector<Rational> dd(n);
  for (std::size_t i = 0; i < n; ++i) {
    dd[i] = dot(d, cat[i].cls, g);
    for (std::size_t j = 0; j < n; ++j) full[i][j] = dot(cat[i].cls, cat[j].cls, g);
  }
  std::vector<char> nd(1UL << n, 0);
  nd[0] = 1;
  std::vector<Decomposition> found;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1UL << i)) s.push_back(i);
    if (mask != 0 && !nd[mask & ~(1UL << s.back())]) continue;
    Mat gram(s.size(), std::vector<Rational>(s.size()));
    std::vector<Rational> rhs(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      rhs[i] = dd[s[i]];
      for (std::size_t j = 0; j < s.size(); ++j) gram[i][j] = full[s[i]][s[j]];
    }
    if (mask != 0) {
      Rational det = pivot_det(gram);
      if (s.size() % 2 == 1 ? det >= 0 : det <= 0) continue;
      nd[mask] = 1;
    }
    auto x = solve(gram, rhs);
    if (!x) continue;
    bool positive = true;
    for (const auto& v : *x) positive = positive && v > 0;
    if (!positive) continue;
    Decomposition dec;
    dec.positive = d.coeffs;
    for (std::size_t i = 0; i < s.size(); ++i) {
      dec.negative[cat[s[i]].id] = (*x)[i];
      for (std::size_t k = 0; k < dec.positive.size(); ++k) dec.positive[k] -= (*x)[i] * cat[s[i]].cls.coeffs[k];
    }
    pklt::DivisorClass p{d.lattice, dec.positive};
    bool nef = true;
    for (const auto& c : cat) nef = nef && dot(p, c.cls, g) >= 0;
    if (nef) found.push_back(std::move(dec));
  }
  return found;
}

/// Discrepancies of the curves created above the pair level, from
/// K_Y + Δ_Y ≡ f*(K_X + Δ): intersect with each exceptional curve and solve.
inline std::map<std::string, Rational> exceptional_discrepancies(const pklt::SurfaceModel& model, int pair_level,
                                                                 const pklt::RDivisor& delta) {
  const int top = model.top_level();
  const auto& g = model.form(top).gram;
  pklt::DivisorClass rest = model.canonical(top);
  pklt::DivisorClass pulled = model.canonical(pair_level);
  for (const auto& [id, c] : delta.terms) {
    pulled += c * model.curve(pair_level, id).cls;
    rest += c * model.curve(top, id).cls;  // strict transform of Δ
  }
  pulled = pklt::pull_back(model, pair_level, top, pulled);
  pklt::DivisorClass lhs = rest - pulled;  // ≡ Σ a_E E
  std::vector<const pklt::Curve*> ex;
  for (const auto& c : model.catalog(top))
    if (c.created_level > pair_level) ex.push_back(&c);
  Mat gram(ex.size(), std::vector<Rational>(ex.size()));
  std::vector<Rational> rhs(ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) {
    rhs[i] = dot(lhs, ex[i]->cls, g);
    for (std::size_t j = 0; j < ex.size(); ++j) gram[i][j] = dot(ex[i]->cls, ex[j]->cls, g);
  }
  std::map<std::string, Rational> out;
  if (ex.empty()) return out;
  auto x = solve(gram, rhs);
  if (!x) return out;
  for (std::size_t i = 0; i < ex.size(); ++i) out[ex[i]->id] = (*x)[i];
  return out;
}

}  // namespace oracle
