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

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "qgm/density_matrix.hpp"
#include "qgm/linalg.hpp"

namespace qgm {

/// Eigenvalues below this are exact zeros in entropy sums (0·log 0 := 0).
inline constexpr double kEntropyCutoff = 1e-14;

/// A − tr(A)·Id/dim.
inline ComplexMatrix traceless_part(const ComplexMatrix& a) {
  ComplexMatrix out = a;
  const cplx shift = a.trace() / static_cast<double>(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out(i, i) -= shift;
  return out;
}

/// Schatten 1-norm of a Hermitian matrix: Σ|λ|.
inline double trace_norm(const ComplexMatrix& h) {
  double s = 0;
  for (double l : hermitian_eigenvalues(h)) s += std::abs(l);
  return s;
}

/// ‖ρ − Id/d‖₁, in [0, 2].
inline double distinguishability(const DensityMatrix& rho) {
  return trace_norm(traceless_part(rho.matrix()));
}

/// −Σ λ log₂ λ over eigenvalues above kEntropyCutoff, in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0;
  for (double l : hermitian_eigenvalues(rho.matrix())) {
    if (l > kEntropyCutoff) s -= l * std::log2(l);
  }
  return s;
}

/// |Λ| − S(ρ_Λ), with |Λ| taken from the matrix dimension.
inline double weak_subvolume_gap(const DensityMatrix& rho) {
  return static_cast<double>(rho.num_qubits()) - von_neumann_entropy(rho);
}

/// ε(A) = ‖A − tr(A)·Id/dim(A)‖₂ (Hilbert–Schmidt).
inline double hs_distance(const ComplexMatrix& a) { return traceless_part(a).frobenius_norm(); }

}  // namespace qgm
