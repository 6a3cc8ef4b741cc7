#pragma once

// Dense complex linear algebra for small multi-qubit Hilbert spaces.
//
// Subsystem ordering follows the Kronecker convention: in kron(a, b) the
// index of `a` is the most significant, so a joint basis index over dims
// (d0, d1, ..., dn-1) is i0*d1*...*dn-1 + ... + in-1.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace polystate::linalg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kKetNormTol = 1e-12;
inline constexpr double kImpossibleTraceTol = 1e-12;
inline constexpr std::size_t kDefaultMaxDim = 1024;

// Hilbert dimension cap. POLYSTATE_MAX_DIM overrides the default of 2^10.
std::size_t max_dim();

// Unit-norm state vector.
class Ket {
 public:
  // Throws InvalidArgument unless the norm is 1 within kKetNormTol.
  static Ket make(CVector amplitudes);
  // Rescales to unit norm. Throws InvalidArgument on a zero vector.
  static Ket normalized(CVector amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const CVector& amplitudes() const { return amp_; }
  CMatrix projector() const { return amp_ * amp_.adjoint(); }

 private:
  explicit Ket(CVector amp) : amp_(std::move(amp)) {}
  CVector amp_;
};

// Hermitian, positive semidefinite, unit-trace operator.
class DensityOperator {
 public:
  // Validates the invariants. Eigenvalues in (-kPsdTol, 0) are clamped to zero
  // and the result renormalized; larger violations throw InvalidArgument.
  static DensityOperator from_matrix(const CMatrix& m);
  static DensityOperator from_ket(const Ket& ket);
  static DensityOperator maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

 private:
  explicit DensityOperator(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

class ObservableOp {
 public:
  // Throws InvalidArgument unless the matrix is Hermitian within kHermitianTol.
  static ObservableOp make(CMatrix m);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

 private:
  explicit ObservableOp(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
bool is_unitary(const CMatrix& m, double tol = kHermitianTol);
std::size_t product(std::span<const std::size_t> dims);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(std::span<const CMatrix> factors);
CVector kron(const CVector& a, const CVector& b);

// Partial trace over every subsystem not listed in `keep`. The kept factors
// stay in ascending subsystem order regardless of the order of `keep`.
CMatrix ptrace(const CMatrix& rho, std::span<const std::size_t> dims,
               std::span<const std::size_t> keep);
DensityOperator ptrace(const DensityOperator& rho, std::span<const std::size_t> dims,
                       std::span<const std::size_t> keep);

// op acting on subsystem `target`, identity elsewhere.
CMatrix lift_local(const CMatrix& op, std::size_t target, std::span<const std::size_t> dims);

// k * rho * k^dagger, unnormalized.
CMatrix conj_apply(const CMatrix& k, const CMatrix& rho);

// Tr(rho * obs). Throws InvalidArgument if the imaginary part exceeds 1e-10.
double expect(const DensityOperator& rho, const ObservableOp& obs);
double expect(const DensityOperator& rho, const CMatrix& hermitian);

// Half the trace norm of the difference, from the Hermitian eigensolver.
double trace_distance(const DensityOperator& a, const DensityOperator& b);

// |<psi|rho|psi>| for a pure reference.
double fidelity(const DensityOperator& rho, const Ket& reference);

// rho / Tr(rho). Throws ImpossibleOutcome when Tr(rho) < kImpossibleTraceTol.
DensityOperator normalize(const CMatrix& rho);

}  // namespace polystate::linalg
