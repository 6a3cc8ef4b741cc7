#include "polystate/standard.hpp"

#include <cmath>
#include <string>

#include "polystate/errors.hpp"

namespace polystate::standard {

using linalg::Complex;
using linalg::CVector;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

CVector vec2(Complex a, Complex b) {
  CVector v(2);
  v << a, b;
  return v;
}

CVector vec4(Complex a, Complex b, Complex c, Complex d) {
  CVector v(4);
  v << a, b, c, d;
  return v;
}

}  // namespace

Ket ket0() { return Ket::make(vec2(1.0, 0.0)); }
Ket ket1() { return Ket::make(vec2(0.0, 1.0)); }
Ket ket_plus() { return Ket::normalized(vec2(1.0, 1.0)); }
Ket ket_minus() { return Ket::normalized(vec2(1.0, -1.0)); }

Ket bell_psi_plus() { return Ket::normalized(vec4(0.0, 1.0, 1.0, 0.0)); }
Ket bell_psi_minus() { return Ket::normalized(vec4(0.0, 1.0, -1.0, 0.0)); }
Ket bell_phi_plus() { return Ket::normalized(vec4(1.0, 0.0, 0.0, 1.0)); }
Ket bell_phi_minus() { return Ket::normalized(vec4(1.0, 0.0, 0.0, -1.0)); }

CMatrix identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return CMatrix::Identity(n, n);
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix pauli_n(double theta, double phi) {
  return std::sin(theta) * std::cos(phi) * pauli_x() +
         std::sin(theta) * std::sin(phi) * pauli_y() + std::cos(theta) * pauli_z();
}

Ket pauli_n_eigenket(double theta, double phi, int sign) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex phase = std::polar(1.0, phi);
  if (sign > 0) return Ket::normalized(vec2(c, phase * s));
  return Ket::normalized(vec2(s, -phase * c));
}

CMatrix hadamard() { return kInvSqrt2 * (pauli_x() + pauli_z()); }

CMatrix charge() { return 0.5 * (pauli_z() - identity(2)); }

CMatrix total_charge(std::size_t n) {
  const linalg::Dims dims(n, 2);
  const auto d = static_cast<Eigen::Index>(linalg::product(dims));
  CMatrix q = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < n; ++i) q += linalg::lift_local(charge(), i, dims);
  return q;
}

Ket product_ket(std::string_view label) {
  if (label.empty()) throw Error(ErrorKind::InvalidArgument, "product ket: empty label");
  CVector v = CVector::Ones(1);
  for (char ch : label) {
    switch (ch) {
      case '0': v = linalg::kron(v, ket0().amplitudes()); break;
      case '1': v = linalg::kron(v, ket1().amplitudes()); break;
      case '+': v = linalg::kron(v, ket_plus().amplitudes()); break;
      case '-': v = linalg::kron(v, ket_minus().amplitudes()); break;
      default:
        throw Error(ErrorKind::InvalidArgument,
                    "product ket: unknown symbol '" + std::string(1, ch) + "' in \"" +
                        std::string(label) + "\"");
    }
  }
  return Ket::normalized(std::move(v));
}

Catalog standard_states_and_ops(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "catalog: qubit count must be >= 1");
  return Catalog{n,         ket0(),          ket1(),    ket_plus(), ket_minus(),
                 bell_psi_plus(), bell_psi_minus(), pauli_x(), pauli_y(),  pauli_z(),
                 charge(),  total_charge(n)};
}

}  // namespace polystate::standard
