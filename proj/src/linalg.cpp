#include "polystate/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "polystate/errors.hpp"

namespace polystate::linalg {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": dimension " +
                                                  std::to_string(a) + " vs " +
                                                  std::to_string(b));
  }
}

}  // namespace

std::size_t max_dim() {
  if (const char* env = std::getenv("POLYSTATE_MAX_DIM")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxDim;
}

Ket Ket::make(CVector amplitudes) {
  if (amplitudes.size() == 0) throw Error(ErrorKind::InvalidArgument, "ket: empty amplitude vector");
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kKetNormTol) {
    throw Error(ErrorKind::InvalidArgument,
                "ket: norm " + std::to_string(norm) + " is not 1");
  }
  return Ket(std::move(amplitudes));
}

Ket Ket::normalized(CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (amplitudes.size() == 0 || norm < 1e-300) {
    throw Error(ErrorKind::InvalidArgument, "ket: cannot normalize a zero vector");
  }
  amplitudes /= norm;
  return Ket(std::move(amplitudes));
}

DensityOperator DensityOperator::from_matrix(const CMatrix& m) {
  require_square(m, "density operator");
  if (static_cast<std::size_t>(m.rows()) > max_dim()) {
    throw Error(ErrorKind::InvalidArgument,
                "density operator: dimension " + std::to_string(m.rows()) +
                    " exceeds the cap " + std::to_string(max_dim()));
  }
  if (!is_hermitian(m)) {
    throw Error(ErrorKind::InvalidArgument, "density operator: matrix is not Hermitian");
  }
  const Complex tr = m.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
    throw Error(ErrorKind::InvalidArgument,
                "density operator: trace " + std::to_string(tr.real()) + " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const auto& evals = es.eigenvalues();
  const double min_eval = evals.minCoeff();
  if (min_eval < -kPsdTol) {
    throw Error(ErrorKind::InvalidArgument,
                "density operator: negative eigenvalue " + std::to_string(min_eval));
  }
  if (min_eval < 0.0) {
    Eigen::VectorXd clamped = evals.cwiseMax(0.0);
    clamped /= clamped.sum();
    CMatrix fixed = es.eigenvectors() * clamped.cast<Complex>().asDiagonal() *
                    es.eigenvectors().adjoint();
    return DensityOperator(std::move(fixed));
  }
  return DensityOperator(m);
}

DensityOperator DensityOperator::from_ket(const Ket& ket) {
  return DensityOperator(ket.projector());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "maximally mixed: zero dimension");
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityOperator(CMatrix::Identity(n, n) / static_cast<double>(dim));
}

ObservableOp ObservableOp::make(CMatrix m) {
  require_square(m, "observable");
  if (!is_hermitian(m)) throw Error(ErrorKind::InvalidArgument, "observable: matrix is not Hermitian");
  return ObservableOp(std::move(m));
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const CMatrix prod = m.adjoint() * m;
  return (prod - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

std::size_t product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  if (factors.empty()) return CMatrix::Identity(1, 1);
  CMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

CMatrix ptrace(const CMatrix& rho, std::span<const std::size_t> dims,
               std::span<const std::size_t> keep) {
  const std::size_t n = dims.size();
  const std::size_t total = product(dims);
  if (rho.rows() != rho.cols() || static_cast<std::size_t>(rho.rows()) != total) {
    throw Error(ErrorKind::DimensionMismatch,
                "ptrace: matrix dimension " + std::to_string(rho.rows()) +
                    " does not match the product of dims " + std::to_string(total));
  }
  if (keep.empty()) throw Error(ErrorKind::DimensionMismatch, "ptrace: keep set is empty");

  std::vector<bool> kept(n, false);
  for (auto k : keep) {
    if (k >= n) throw Error(ErrorKind::DimensionMismatch, "ptrace: subsystem index out of range");
    kept[k] = true;
  }
  if (std::all_of(kept.begin(), kept.end(), [](bool b) { return b; })) return rho;

  // Stride of each subsystem in the joint index.
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t k = n; k-- > 1;) stride[k - 1] = stride[k] * dims[k];

  std::vector<std::size_t> kept_ids, traced_ids;
  for (std::size_t k = 0; k < n; ++k) (kept[k] ? kept_ids : traced_ids).push_back(k);

  // Joint offsets of every kept (resp. traced) multi-index.
  auto offsets = [&](const std::vector<std::size_t>& ids) {
    std::vector<std::size_t> out{0};
    for (auto id : ids) {
      std::vector<std::size_t> next;
      next.reserve(out.size() * dims[id]);
      for (auto base : out)
        for (std::size_t v = 0; v < dims[id]; ++v) next.push_back(base + v * stride[id]);
      out = std::move(next);
    }
    return out;
  };
  const auto kept_off = offsets(kept_ids);
  const auto traced_off = offsets(traced_ids);

  const auto m = static_cast<Eigen::Index>(kept_off.size());
  CMatrix out = CMatrix::Zero(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) {
      Complex acc{0.0, 0.0};
      for (auto t : traced_off) {
        acc += rho(static_cast<Eigen::Index>(kept_off[r] + t),
                   static_cast<Eigen::Index>(kept_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

DensityOperator ptrace(const DensityOperator& rho, std::span<const std::size_t> dims,
                       std::span<const std::size_t> keep) {
  return DensityOperator::from_matrix(ptrace(rho.matrix(), dims, keep));
}

CMatrix lift_local(const CMatrix& op, std::size_t target, std::span<const std::size_t> dims) {
  if (target >= dims.size()) {
    throw Error(ErrorKind::DimensionMismatch, "lift_local: target subsystem out of range");
  }
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != dims[target]) {
    throw Error(ErrorKind::DimensionMismatch,
                "lift_local: operator dimension " + std::to_string(op.rows()) +
                    " does not match subsystem dimension " + std::to_string(dims[target]));
  }
  std::size_t before = 1, after = 1;
  for (std::size_t k = 0; k < target; ++k) before *= dims[k];
  for (std::size_t k = target + 1; k < dims.size(); ++k) after *= dims[k];
  const auto b = static_cast<Eigen::Index>(before);
  const auto a = static_cast<Eigen::Index>(after);
  return kron(kron(CMatrix::Identity(b, b), op), CMatrix::Identity(a, a));
}

CMatrix conj_apply(const CMatrix& k, const CMatrix& rho) {
  require_square(k, "conj_apply");
  require_square(rho, "conj_apply");
  require_same_dim(static_cast<std::size_t>(k.rows()), static_cast<std::size_t>(rho.rows()),
                   "conj_apply");
  return k * rho * k.adjoint();
}

double expect(const DensityOperator& rho, const CMatrix& hermitian) {
  require_same_dim(rho.dim(), static_cast<std::size_t>(hermitian.rows()), "expect");
  require_square(hermitian, "expect");
  const Complex v = (rho.matrix() * hermitian).trace();
  if (std::abs(v.imag()) > 1e-10) {
    throw Error(ErrorKind::InvalidArgument,
                "expect: imaginary part " + std::to_string(v.imag()) +
                    " signals a non-Hermitian input");
  }
  return v.real();
}

double expect(const DensityOperator& rho, const ObservableOp& obs) {
  return expect(rho, obs.matrix());
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  require_same_dim(a.dim(), b.dim(), "trace_distance");
  const CMatrix diff = a.matrix() - b.matrix();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityOperator& rho, const Ket& reference) {
  require_same_dim(rho.dim(), reference.dim(), "fidelity");
  const auto& v = reference.amplitudes();
  return std::abs(v.dot(rho.matrix() * v));
}

DensityOperator normalize(const CMatrix& rho) {
  require_square(rho, "normalize");
  const Complex tr = rho.trace();
  if (tr.real() < kImpossibleTraceTol) {
    throw ImpossibleOutcome("normalize: trace " + std::to_string(tr.real()) +
                            " is below 1e-12 (zero-probability branch)");
  }
  return DensityOperator::from_matrix(rho / tr.real());
}

}  // namespace polystate::linalg
