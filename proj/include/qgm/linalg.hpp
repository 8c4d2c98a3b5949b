// Copyright 2026 The qgm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgm {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const std::vector<double>& d) {
    ComplexMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t dim() const { return dim_; }
  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  const std::vector<cplx>& data() const { return data_; }

  cplx trace() const {
    cplx t = 0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  /// Largest |A - A†| entry.
  double hermiticity_defect() const {
    double e = 0;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = r; c < dim_; ++c)
        e = std::max(e, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return e;
  }

  double frobenius_norm() const {
    double s = 0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(cplx s) {
    for (auto& v : data_) v *= s;
    return *this;
  }
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    a.require_same(b);
    const std::size_t d = a.dim_;
    ComplexMatrix m(d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t k = 0; k < d; ++k) {
        const cplx v = a(r, k);
        if (v == cplx{}) continue;
        for (std::size_t c = 0; c < d; ++c) m(r, c) += v * b(k, c);
      }
    return m;
  }

  /// Kronecker product a ⊗ b.
  friend ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.dim_ * b.dim_);
    for (std::size_t r1 = 0; r1 < a.dim_; ++r1)
      for (std::size_t c1 = 0; c1 < a.dim_; ++c1)
        for (std::size_t r2 = 0; r2 < b.dim_; ++r2)
          for (std::size_t c2 = 0; c2 < b.dim_; ++c2)
            m(r1 * b.dim_ + r2, c1 * b.dim_ + c2) = a(r1, c1) * b(r2, c2);
    return m;
  }

 private:
  void require_same(const ComplexMatrix& o) const {
    if (o.dim_ != dim_) {
      throw std::invalid_argument("matrix dimension mismatch: " + std::to_string(dim_) +
                                  " vs " + std::to_string(o.dim_));
    }
  }

  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
  int sweeps = 0;
};

/// Cyclic Jacobi for Hermitian matrices. Each (p,q) rotation first removes the
/// phase of a_pq with diag(1, e^{-iφ}), then applies the real symmetric
/// Jacobi rotation. Stops when the off-diagonal Frobenius norm drops below
/// `tolerance` (absolute, floored at the rounding level of large matrices).
namespace detail {
// Plain complex product; std::complex operator* carries NaN/Inf recovery that
// dominates the inner loops below.
inline cplx mul(cplx x, cplx y) {
  return {x.real() * y.real() - x.imag() * y.imag(), x.real() * y.imag() + x.imag() * y.real()};
}
}  // namespace detail

inline HermitianEigen hermitian_eigen(ComplexMatrix a, double tolerance = 1e-12,
                                      int max_sweeps = 100, bool want_vectors = true) {
  const std::size_t d = a.dim();
  tolerance = std::max(tolerance, 1e-15 * static_cast<double>(d) * a.frobenius_norm());
  HermitianEigen out;
  out.vectors = ComplexMatrix::identity(d);
  ComplexMatrix& v = out.vectors;

  const auto off_norm = [&] {
    double s = 0;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  while (off_norm() >= tolerance) {
    if (out.sweeps++ >= max_sweeps) {
      throw std::runtime_error("Jacobi eigensolver did not converge in " +
                               std::to_string(max_sweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        const cplx phase = apq / r;  // e^{iφ}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2 * r);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = t * c;
        // W = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p,q) plane; w_pp = c, w_pq = s.
        const cplx wqp = -s * std::conj(phase), wqq = c * std::conj(phase);
        // A ← A W
        for (std::size_t k = 0; k < d; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c + detail::mul(akq, wqp);
          a(k, q) = akp * s + detail::mul(akq, wqq);
        }
        // A ← W† A
        for (std::size_t k = 0; k < d; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = apk * c + detail::mul(std::conj(wqp), aqk);
          a(q, k) = apk * s + detail::mul(std::conj(wqq), aqk);
        }
        a(p, q) = a(q, p) = 0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (!want_vectors) continue;
        for (std::size_t k = 0; k < d; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c + detail::mul(vkq, wqp);
          v(k, q) = vkp * s + detail::mul(vkq, wqq);
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  ComplexMatrix sorted(d);
  out.values.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t k = 0; k < d; ++k) sorted(k, j) = v(k, order[j]);
  }
  out.vectors = std::move(sorted);
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a, double tolerance = 1e-12) {
  return hermitian_eigen(a, tolerance, 100, false).values;
}

}  // namespace qgm
