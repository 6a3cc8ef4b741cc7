#pragma once

// Named states and operators for qubit scenarios.

#include <cstddef>
#include <string_view>

#include "polystate/linalg.hpp"

namespace polystate::standard {

using linalg::CMatrix;
using linalg::Ket;

Ket ket0();
Ket ket1();
Ket ket_plus();
Ket ket_minus();
// (|01> + |10>)/sqrt(2) and (|01> - |10>)/sqrt(2).
Ket bell_psi_plus();
Ket bell_psi_minus();
Ket bell_phi_plus();
Ket bell_phi_minus();

CMatrix identity(std::size_t dim);
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
// sin(theta)cos(phi) X + sin(theta)sin(phi) Y + cos(theta) Z
CMatrix pauli_n(double theta, double phi);
// Eigenvector of pauli_n with eigenvalue +1 (sign > 0) or -1.
Ket pauli_n_eigenket(double theta, double phi, int sign);
CMatrix hadamard();

// Local charge (sigma_z - 1)/2: |0> carries 0, |1> carries -1.
CMatrix charge();
// Sum of local charges over n qubits.
CMatrix total_charge(std::size_t n);

// Product ket from a label over {0, 1, +, -}, e.g. "0+" = |0>|+>.
// Throws InvalidArgument on any other character.
Ket product_ket(std::string_view label);

struct Catalog {
  std::size_t n;
  Ket zero, one, plus, minus;
  Ket psi_plus, psi_minus;
  CMatrix sigma_x, sigma_y, sigma_z;
  CMatrix q;         // single-qubit charge
  CMatrix total_q;   // n-qubit total charge
};

Catalog standard_states_and_ops(std::size_t n);

}  // namespace polystate::standard
