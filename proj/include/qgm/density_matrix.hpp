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
#include <stdexcept>
#include <string>
#include <utility>

#include "qgm/linalg.hpp"

namespace qgm {

/// Hermitian, unit-trace matrix on m qubits (dimension 2^m). Positivity is not
/// required, so shadow estimates fit the same type.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  DensityMatrix() : matrix_(ComplexMatrix::identity(1)) {}

  explicit DensityMatrix(ComplexMatrix m, double tolerance = kTolerance)
      : matrix_(std::move(m)) {
    const std::size_t d = matrix_.dim();
    if (d == 0 || (d & (d - 1)) != 0) {
      throw std::invalid_argument("density matrix dimension must be a power of two, got " +
                                  std::to_string(d));
    }
    while ((std::size_t{1} << num_qubits_) < d) ++num_qubits_;
    if (matrix_.hermiticity_defect() > tolerance) {
      throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - cplx{1.0, 0.0}) > tolerance) {
      throw std::invalid_argument("density matrix trace differs from 1");
    }
  }

  std::size_t dim() const { return matrix_.dim(); }
  std::size_t num_qubits() const { return num_qubits_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

  static DensityMatrix maximally_mixed(std::size_t m) {
    return DensityMatrix(ComplexMatrix::identity(std::size_t{1} << m) *
                         cplx{1.0 / static_cast<double>(std::size_t{1} << m), 0.0});
  }

 private:
  ComplexMatrix matrix_;
  std::size_t num_qubits_ = 0;
};

}  // namespace qgm
