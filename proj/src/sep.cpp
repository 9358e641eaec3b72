#include "sepgram/sep.hpp"

#include "sepgram/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sepgram {
namespace {

double max_abs_entry(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

int first_zero_entry_column(const ComplexMatrix& d, std::set<int>* columns) {
  const double scale = max_abs_entry(d);
  int found = -1;
  for (Eigen::Index l = 0; l < d.rows(); ++l) {
    for (Eigen::Index m = 0; m < d.cols(); ++m) {
      if (std::abs(d(l, m)) <= kZeroDiagonalTol * scale) {
        if (found < 0) found = static_cast<int>(m);
        if (columns) columns->insert(static_cast<int>(m));
      }
    }
  }
  return found;
}

ComplexMatrix givens(int size, int p, int q, double angle) {
  ComplexMatrix g = ComplexMatrix::Identity(size, size);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  g(p, p) = c;
  g(q, q) = c;
  g(p, q) = -s;
  g(q, p) = s;
  return g;
}

}  // namespace

ComplexMatrix SeparableDecomposition::density() const {
  const int size = dims.total();
  ComplexMatrix out = ComplexMatrix::Zero(size, size);
  for (int k = 0; k < this->size(); ++k) {
    const ComplexVector x = kron(phi.col(k), psi.col(k));
    out.noalias() += x * x.adjoint();
  }
  return out;
}

SeparableDecomposition SeparableDecomposition::without_null_terms(double rel_tol) const {
  std::vector<double> norms;
  double top = 0.0;
  for (int k = 0; k < size(); ++k) {
    norms.push_back(phi.col(k).norm() * psi.col(k).norm());
    top = std::max(top, norms.back());
  }
  std::vector<int> keep;
  for (int k = 0; k < size(); ++k) {
    if (norms[k] > rel_tol * top) keep.push_back(k);
  }
  SeparableDecomposition out;
  out.dims = dims;
  out.phi.resize(phi.rows(), static_cast<Eigen::Index>(keep.size()));
  out.psi.resize(psi.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.phi.col(static_cast<Eigen::Index>(i)) = phi.col(keep[i]);
    out.psi.col(static_cast<Eigen::Index>(i)) = psi.col(keep[i]);
  }
  return out;
}

GramSystem DiagonalGramCertificate::gram() const {
  ComplexMatrix vecs(k(), dims.total());
  for (int i = 0; i < dims.m; ++i) {
    for (int j = 0; j < dims.n; ++j) vecs.col(i * dims.n + j) = d.col(i).cwiseProduct(v.col(j));
  }
  return GramSystem(dims, vecs);
}

ComplexMatrix DiagonalGramCertificate::density() const { return certificate_to_decomposition(*this).density(); }

DiagonalGramCertificate decomposition_to_certificate(const SeparableDecomposition& sd,
                                                     const std::optional<ComplexMatrix>& a_basis) {
  if (sd.phi.rows() != sd.dims.m || sd.psi.rows() != sd.dims.n || sd.phi.cols() != sd.psi.cols()) {
    throw Error(ErrorCode::SizeMismatch, "decomposition factors do not match the dimensions");
  }
  DiagonalGramCertificate c;
  c.dims = sd.dims;
  c.a_basis = a_basis;
  c.d = a_basis ? ComplexMatrix(sd.phi.adjoint() * *a_basis) : ComplexMatrix(sd.phi.adjoint());
  c.v = sd.psi.adjoint();
  if (first_zero_entry_column(c.d, nullptr) >= 0) {
    throw Error(ErrorCode::ZeroDiagonal, "a product factor has a vanishing component in the A basis");
  }
  return c;
}

DiagonalGramCertificate certificate_with_nonsingular_d(const SeparableDecomposition& sd) {
  const SeparableDecomposition clean = sd.without_null_terms();
  const int m = clean.dims.m;
  std::set<int> offending;
  ComplexMatrix d = clean.phi.adjoint();
  if (first_zero_entry_column(d, &offending) < 0) return decomposition_to_certificate(clean);

  for (int attempt = 1; attempt <= 8; ++attempt) {
    ComplexMatrix basis = ComplexMatrix::Identity(m, m);
    // One rotation per unordered pair; (0,1) and (1,0) would cancel for M = 2.
    std::set<std::pair<int, int>> pairs;
    for (int col : offending) pairs.insert(std::minmax(col, (col + 1) % m));
    for (const auto& [lo, hi] : pairs) basis = basis * givens(m, lo, hi, attempt * 1e-3);
    d = clean.phi.adjoint() * basis;
    if (first_zero_entry_column(d, nullptr) < 0) return decomposition_to_certificate(clean, basis);
  }
  throw Error(ErrorCode::ZeroDiagonal, "no small basis rotation removes the zero diagonal entries");
}

SeparableDecomposition certificate_to_decomposition(const DiagonalGramCertificate& c, const ComplexMatrix* rho,
                                                    double tol) {
  SeparableDecomposition sd;
  sd.dims = c.dims;
  sd.phi = c.a_basis ? ComplexMatrix(*c.a_basis * c.d.adjoint()) : ComplexMatrix(c.d.adjoint());
  sd.psi = c.v.adjoint();
  if (rho != nullptr) {
    const double res = max_abs(sd.density() - *rho);
    if (res > tol * std::max(1.0, max_abs(*rho))) {
      throw Error(ErrorCode::CertificateInvalid, "reconstruction does not reproduce rho", res);
    }
  }
  return sd;
}

CertificateCheck verify_certificate(const DiagonalGramCertificate& c, const ComplexMatrix& rho, double tol) {
  CertificateCheck out;
  if (rho.rows() != c.dims.total() || rho.cols() != c.dims.total() || c.d.cols() != c.dims.m ||
      c.v.cols() != c.dims.n || c.d.rows() != c.v.rows()) {
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  if (c.a_basis) {
    const ComplexMatrix frame = kron(*c.a_basis, ComplexMatrix::Identity(c.dims.n, c.dims.n));
    out.residual = c.gram().residual(frame.adjoint() * rho * frame);
  } else {
    out.residual = c.gram().residual(rho);
  }
  out.pass = out.residual <= tol;
  return out;
}

DiagonalGramCertificate conjugate_frame(const DiagonalGramCertificate& c) {
  DiagonalGramCertificate out = c;
  out.v = c.v.conjugate();
  return out;
}

DiagonalGramCertificate conjugate_diagonals(const DiagonalGramCertificate& c) {
  DiagonalGramCertificate out = c;
  out.d = c.d.conjugate();
  if (c.a_basis) out.a_basis = c.a_basis->conjugate();
  return out;
}

FfcnmFamily build_ffcnm(const DiagonalGramCertificate& c, const ComplexMatrix& u) {
  const int k = c.k();
  if (u.rows() != k || u.cols() != k) throw Error(ErrorCode::SizeMismatch, "unitary must be K x K");
  const double scale = max_abs_entry(c.d);
  for (Eigen::Index l = 0; l < c.d.rows(); ++l) {
    for (Eigen::Index m = 0; m < c.d.cols(); ++m) {
      if (std::abs(c.d(l, m)) <= kZeroDiagonalTol * scale) {
        throw Error(ErrorCode::SingularD, "certificate has a singular D", std::abs(c.d(l, m)));
      }
    }
  }
  FfcnmFamily f;
  f.dim_a = c.dims.m;
  f.k = k;
  for (int from = 0; from < c.dims.m; ++from) {
    for (int to = from + 1; to < c.dims.m; ++to) {
      const ComplexVector ratio = c.d.col(to).cwiseQuotient(c.d.col(from));
      f.entries.push_back({from, to, u * ratio.asDiagonal() * u.adjoint()});
    }
  }
  return f;
}

GramSystem ffcnm_gram(const DiagonalGramCertificate& c, const ComplexMatrix& u) {
  return GramSystem(c.dims, u * c.gram().vectors());
}

double pair_relation_residual(const ComplexMatrix& mat, const GramSystem& g, int from, int to) {
  if (mat.rows() != g.k() || mat.cols() != g.k()) throw Error(ErrorCode::SizeMismatch, "relation matrix must be K x K");
  double worst = 0.0;
  for (int n = 0; n < g.dims().n; ++n) worst = std::max(worst, (mat * g.w(from, n) - g.w(to, n)).norm());
  return worst;
}

FfcnmReport verify_ffcnm(const FfcnmFamily& f, const GramSystem& g, double tol) {
  if (f.k != g.k()) throw Error(ErrorCode::SizeMismatch, "family and Gram system differ in K");
  FfcnmReport r;
  double scale = 1.0;
  for (Eigen::Index c = 0; c < g.vectors().cols(); ++c) scale = std::max(scale, g.vectors().col(c).norm());
  for (std::size_t a = 0; a < f.entries.size(); ++a) {
    const FfcnmEntry& e = f.entries[a];
    r.normality = std::max(r.normality, normality_residual(e.mat));
    r.relation = std::max(r.relation, pair_relation_residual(e.mat, g, e.from, e.to));
    for (std::size_t b = a + 1; b < f.entries.size(); ++b) {
      r.commutation = std::max(r.commutation, commutation_residual(e.mat, f.entries[b].mat));
    }
  }
  r.pass = r.normality <= tol && r.commutation <= tol && r.relation <= tol * scale;
  return r;
}

DiagonalGramCertificate extract_certificate(const FfcnmFamily& f, const GramSystem& g, double tol) {
  const int m = f.dim_a;
  if (f.k != g.k() || g.dims().m != m) throw Error(ErrorCode::SizeMismatch, "family and Gram system differ in shape");

  int reference = -1;
  std::vector<const FfcnmEntry*> from_ref;
  for (int r = 0; r < m && reference < 0; ++r) {
    std::vector<const FfcnmEntry*> found(m, nullptr);
    for (const FfcnmEntry& e : f.entries) {
      if (e.from == r && e.to != r) found[e.to] = &e;
    }
    bool complete = true;
    for (int t = 0; t < m; ++t) complete = complete && (t == r || found[t] != nullptr);
    if (complete) {
      reference = r;
      from_ref = found;
    }
  }
  if (reference < 0) throw Error(ErrorCode::CertificateInvalid, "family has no reference index reaching every other");

  std::vector<ComplexMatrix> mats;
  for (const FfcnmEntry& e : f.entries) mats.push_back(e.mat);
  const JointDiagonalization jd = joint_diagonalize(mats);

  DiagonalGramCertificate c;
  c.dims = g.dims();
  c.d.resize(f.k, m);
  c.v.resize(f.k, g.dims().n);
  for (int n = 0; n < g.dims().n; ++n) c.v.col(n) = jd.u.adjoint() * g.w(reference, n);
  for (int t = 0; t < m; ++t) {
    if (t == reference) {
      c.d.col(t).setOnes();
    } else {
      c.d.col(t) = (jd.u.adjoint() * from_ref[t]->mat * jd.u).diagonal();
    }
  }

  const ComplexMatrix target = g.gram_matrix();
  const double res = c.gram().residual(target);
  if (res > tol * std::max(1.0, max_abs(target))) {
    throw Error(ErrorCode::CertificateInvalid, "extracted certificate does not reproduce the Gram matrix", res);
  }
  return c;
}

}  // namespace sepgram
