#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace akmeter {

// Eigenvalues (ascending) of an n x n complex Hermitian matrix, row major.
// Implemented by embedding into the real symmetric 2n x 2n matrix
// [[Re, -Im], [Im, Re]], whose spectrum is that of the input, doubled.
std::vector<double> hermitian_eigenvalues(std::span<const std::complex<double>> m,
                                          std::size_t n);

// Eigenvalues (ascending) of a real symmetric matrix, row major. Householder
// tridiagonalization followed by implicit-shift QL. Destroys its copy only.
std::vector<double> symmetric_eigenvalues(std::vector<double> m, std::size_t n);

}  // namespace akmeter
