#include "sepgram/provec.hpp"

#include "sepgram/errors.hpp"
#include "sepgram/kernels.hpp"
#include "sepgram/states.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sepgram {

ComplexVector ProductVectorHit::product() const { return kron(e, f); }

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Linear conditions on f: (X0 + g X1) f = 0 and (Y0 + conj(g) Y1) f = 0.
struct Pencil {
  ComplexMatrix x0, x1;
  ComplexMatrix y0, y1;

  ComplexMatrix at(cplx g) const {
    ComplexMatrix m(x0.rows() + y0.rows(), x0.cols());
    m.topRows(x0.rows()) = x0 + g * x1;
    m.bottomRows(y0.rows()) = y0 + std::conj(g) * y1;
    return m;
  }
  ComplexMatrix at_infinity() const {
    ComplexMatrix m(x0.rows() + y0.rows(), x0.cols());
    m.topRows(x0.rows()) = x1;
    m.bottomRows(y0.rows()) = y1;
    return m;
  }
  // The chart around infinity: g = 1/h, rows scaled by h (resp. conj(h)).
  Pencil swapped_chart() const { return {x1, x0, y1, y0}; }
};

struct Kernels {
  int rank = 0;
  int rank_pt = 0;
  ComplexMatrix ker;     // 2N x k
  ComplexMatrix ker_pt;  // 2N x k'
};

ComplexMatrix kernel_of(const ComplexMatrix& h, double rel_tol, int* rank) {
  const HermitianEigen eig = hermitian_eigen(h);
  const Eigen::Index n = eig.values.size();
  const double top = eig.values.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> null;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eig.values[i]) <= rel_tol * top) null.push_back(i);
  }
  *rank = static_cast<int>(n - static_cast<Eigen::Index>(null.size()));
  ComplexMatrix k(n, static_cast<Eigen::Index>(null.size()));
  for (std::size_t c = 0; c < null.size(); ++c) k.col(static_cast<Eigen::Index>(c)) = eig.vectors.col(null[c]);
  return k;
}

Kernels kernels_of(const DensityMatrix& rho, double rel_tol) {
  Kernels k;
  k.ker = kernel_of(rho.mat(), rel_tol, &k.rank);
  k.ker_pt = kernel_of(partial_transpose(rho, Subsystem::A), rel_tol, &k.rank_pt);
  return k;
}

// Rows <Psi| restricted to the |0> and |1> blocks of subsystem A.
Pencil pencil_from(const Kernels& k, int n) {
  Pencil p;
  p.x0 = k.ker.topRows(n).adjoint();
  p.x1 = k.ker.bottomRows(n).adjoint();
  p.y0 = k.ker_pt.topRows(n).adjoint();
  p.y1 = k.ker_pt.bottomRows(n).adjoint();
  return p;
}

ProductVectorHit make_hit(const Pencil& pencil, cplx alpha, bool at_infinity) {
  ProductVectorHit hit;
  hit.alpha = at_infinity ? cplx(0.0) : alpha;
  hit.at_infinity = at_infinity;
  hit.e = ComplexVector(2);
  if (at_infinity) {
    hit.e << 0.0, 1.0;
  } else {
    hit.e << 1.0, alpha;
    hit.e /= hit.e.norm();
  }
  const ComplexMatrix sys = at_infinity ? pencil.at_infinity() : pencil.at(alpha);
  hit.f = smallest_right_singular(sys).vector;
  fix_phase(hit.f);
  const cplx e0 = hit.e[0], e1 = hit.e[1];
  const ComplexVector r = (e0 * pencil.x0 + e1 * pencil.x1) * hit.f;
  const ComplexVector rp = (std::conj(e0) * pencil.y0 + std::conj(e1) * pencil.y1) * hit.f;
  hit.residual_range = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  hit.residual_pt_range = rp.size() ? rp.cwiseAbs().maxCoeff() : 0.0;
  return hit;
}

bool verified(const ProductVectorHit& h, double tol) { return h.residual_range <= tol && h.residual_pt_range <= tol; }

double chordal(cplx a, bool a_inf, cplx b, bool b_inf) {
  if (a_inf && b_inf) return 0.0;
  if (a_inf) return 1.0 / std::sqrt(1.0 + std::norm(b));
  if (b_inf) return 1.0 / std::sqrt(1.0 + std::norm(a));
  return std::abs(a - b) / (std::sqrt(1.0 + std::norm(a)) * std::sqrt(1.0 + std::norm(b)));
}

void add_unique(std::vector<ProductVectorHit>& hits, const ProductVectorHit& h) {
  for (const ProductVectorHit& other : hits) {
    if (chordal(h.alpha, h.at_infinity, other.alpha, other.at_infinity) < 1e-6) return;
  }
  hits.push_back(h);
}

void sort_hits(std::vector<ProductVectorHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const ProductVectorHit& a, const ProductVectorHit& b) {
    if (a.at_infinity != b.at_infinity) return b.at_infinity;
    const double ma = std::abs(a.alpha), mb = std::abs(b.alpha);
    if (std::abs(ma - mb) > 1e-9 * std::max(1.0, ma)) return ma < mb;
    return std::arg(a.alpha) < std::arg(b.alpha);
  });
}

// Coefficients c_j of a polynomial of degree < n from its values at the n-th
// roots of unity.
std::vector<cplx> interpolate_unit_circle(const std::vector<cplx>& values) {
  const std::size_t n = values.size();
  std::vector<cplx> coeffs(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += values[k] * std::polar(1.0, -kTwoPi * static_cast<double>(j * k % n) / n);
    coeffs[j] = acc / static_cast<double>(n);
  }
  return coeffs;
}

cplx unit_root(std::size_t k, std::size_t n) { return std::polar(1.0, kTwoPi * static_cast<double>(k) / n); }

std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs, double rel_trim) {
  double top = 0.0;
  for (const cplx& c : coeffs) top = std::max(top, std::abs(c));
  while (!coeffs.empty() && std::abs(coeffs.back()) <= rel_trim * top) coeffs.pop_back();
  const std::size_t deg = coeffs.empty() ? 0 : coeffs.size() - 1;
  if (deg == 0) return {};
  ComplexMatrix companion = ComplexMatrix::Zero(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<ComplexMatrix> es(companion, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigensolverFailure, "companion eigensolver failed");
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return roots;
}

// Levenberg-Marquardt on (g, f) for || pencil.at(g) f || with f gauged by a
// unit pivot component.
struct NullFit {
  cplx g;
  double residual = 0.0;
};

NullFit refine_root(const Pencil& pencil, cplx g, int iterations) {
  const Eigen::Index n = pencil.x0.cols();
  ComplexVector f = smallest_right_singular(pencil.at(g)).vector;
  Eigen::Index pivot = 0;
  f.cwiseAbs().maxCoeff(&pivot);
  f /= f[pivot];

  auto resid = [&](cplx gg, const ComplexVector& ff) { return ComplexVector(pencil.at(gg) * ff); };
  ComplexVector r = resid(g, f);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  const Eigen::Index rows = r.size();
  const Eigen::Index params = 2 + 2 * (n - 1);
  for (int it = 0; it < iterations && cost > 1e-30; ++it) {
    const ComplexMatrix m = pencil.at(g);
    Eigen::MatrixXd jac(2 * rows, params);
    ComplexVector dx(rows), dy(rows);
    dx << pencil.x1 * f, pencil.y1 * f;
    dy << cplx(0.0, 1.0) * (pencil.x1 * f), cplx(0.0, -1.0) * (pencil.y1 * f);
    auto put = [&](Eigen::Index col, const ComplexVector& v) {
      jac.col(col).head(rows) = v.real();
      jac.col(col).tail(rows) = v.imag();
    };
    put(0, dx);
    put(1, dy);
    Eigen::Index col = 2;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == pivot) continue;
      put(col++, m.col(j));
      put(col++, cplx(0.0, 1.0) * m.col(j));
    }
    Eigen::VectorXd rr(2 * rows);
    rr.head(rows) = r.real();
    rr.tail(rows) = r.imag();
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * rr;
    bool accepted = false;
    for (int tries = 0; tries < 20 && !accepted; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu * std::max(jtj.diagonal().maxCoeff(), 1e-300);
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      const cplx tg = g + cplx(step[0], step[1]);
      ComplexVector tf = f;
      col = 2;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == pivot) continue;
        tf[j] += cplx(step[col], step[col + 1]);
        col += 2;
      }
      const ComplexVector tr = resid(tg, tf);
      if (tr.squaredNorm() < cost) {
        g = tg;
        f = tf;
        r = tr;
        cost = tr.squaredNorm();
        mu = std::max(mu / 3.0, 1e-15);
        accepted = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }
  return {g, std::sqrt(cost) / std::max(f.norm(), 1e-300)};
}

// Candidates of the affine chart: roots of an eliminant when one side has
// N - 1 independent rows and the other at least two.
struct Algebraic {
  bool degenerate = false;
  std::vector<cplx> roots;
};

ComplexMatrix generic_combination(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  return rng.gaussian_matrix(static_cast<int>(rows), static_cast<int>(cols));
}

Algebraic eliminant_roots(const Pencil& pencil) {
  const Eigen::Index n = pencil.x0.cols();
  ComplexMatrix x0 = pencil.x0, x1 = pencil.x1;
  if (x0.rows() > n - 1) {
    const ComplexMatrix r = generic_combination(n - 1, x0.rows(), 0x5eed01);
    x0 = r * x0;
    x1 = r * x1;
  }
  const ComplexMatrix c = generic_combination(2, pencil.y0.rows(), 0x5eed02);
  const ComplexMatrix c0 = c * pencil.y0;
  const ComplexMatrix c1 = c * pencil.y1;

  const std::size_t points = static_cast<std::size_t>(2 * (n - 1) + 1);
  std::vector<cplx> values(points);
  double scale = 0.0;
  ComplexMatrix sq(n, n);
  for (std::size_t k = 0; k < points; ++k) {
    const cplx z = unit_root(k, points);
    sq.topRows(n - 1) = x0 + z * x1;
    cplx d[2][2];
    for (int which = 0; which < 2; ++which) {
      sq.row(n - 1) = c0.row(which);
      d[which][0] = sq.determinant();
      sq.row(n - 1) = c1.row(which);
      d[which][1] = sq.determinant();
    }
    values[k] = d[0][0] * d[1][1] - d[1][0] * d[0][1];
    scale = std::max(scale, std::abs(d[0][0] * d[1][1]) + std::abs(d[1][0] * d[0][1]));
  }
  const std::vector<cplx> coeffs = interpolate_unit_circle(values);
  double top = 0.0;
  for (const cplx& co : coeffs) top = std::max(top, std::abs(co));
  Algebraic out;
  if (top <= 1e-9 * scale) {
    out.degenerate = true;
    return out;
  }
  out.roots = polynomial_roots(coeffs, 1e-12);
  return out;
}

std::vector<cplx> seed_grid(double radius, int count) {
  std::vector<cplx> seeds;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      const cplx z(-radius + 2.0 * radius * (i + 0.5) / count, -radius + 2.0 * radius * (j + 0.5) / count);
      if (std::abs(z) <= radius) seeds.push_back(z);
    }
  }
  return seeds;
}

// Seeded local solves on both charts. Returns verified distinct hits.
std::vector<ProductVectorHit> seeded_search(const Pencil& pencil, double tol) {
  std::vector<ProductVectorHit> hits;
  const Pencil other = pencil.swapped_chart();
  for (int chart = 0; chart < 2; ++chart) {
    const Pencil& p = chart == 0 ? pencil : other;
    for (const cplx& seed : seed_grid(chart == 0 ? 3.0 : 1.0, 12)) {
      const NullFit fit = refine_root(p, seed, 60);
      if (fit.residual > 1e-10) continue;
      const bool inf = chart == 1 && std::abs(fit.g) < 1e-14;
      const cplx alpha = chart == 0 ? fit.g : (inf ? cplx(0.0) : 1.0 / fit.g);
      if (!inf && !std::isfinite(std::abs(alpha))) continue;
      const ProductVectorHit h = make_hit(pencil, alpha, inf);
      if (verified(h, tol)) add_unique(hits, h);
    }
  }
  return hits;
}

void conjugate_hits(std::vector<ProductVectorHit>& hits, const Pencil& original) {
  for (ProductVectorHit& h : hits) {
    h = make_hit(original, std::conj(h.alpha), h.at_infinity);
  }
}

}  // namespace

namespace {

// `continuum` is set instead of throwing when the solutions are not isolated;
// the hits are then a sample of the continuum.
ProductVectorSearch search_product_vectors(const DensityMatrix& rho, const ProductVectorOptions& options, bool* continuum) {
  *continuum = false;
  if (rho.dim_a() != 2) throw Error(ErrorCode::UnsupportedDimension, "product vector search is implemented for 2 x N");
  const int n = rho.dim_b();
  const Kernels k = kernels_of(rho, options.rank_tol);
  ProductVectorSearch out;
  out.rank = k.rank;
  out.rank_pt = k.rank_pt;
  out.kernel = 2 * n - k.rank;
  out.kernel_pt = 2 * n - k.rank_pt;
  const Pencil pencil = pencil_from(k, n);
  if (out.kernel + out.kernel_pt < n) {
    // Fewer conditions than unknowns: every alpha admits a solution.
    *continuum = true;
    out.method = "underdetermined";
    out.hits.push_back(make_hit(pencil, cplx(0.0), false));
    return out;
  }

  // Put the side with at least N - 1 rows first; swapping sides conjugates
  // the parameter.
  const bool swap = out.kernel < n - 1 && out.kernel_pt >= n - 1;
  const Pencil primary = swap ? Pencil{pencil.y0, pencil.y1, pencil.x0, pencil.x1} : pencil;
  const int rows_x = static_cast<int>(primary.x0.rows());
  const int rows_y = static_cast<int>(primary.y0.rows());

  std::vector<ProductVectorHit> hits;
  bool algebraic = rows_x >= n - 1 && rows_y >= 2;
  if (algebraic) {
    const Algebraic alg = eliminant_roots(primary);
    if (alg.degenerate) {
      algebraic = false;
    } else {
      out.candidates = static_cast<int>(alg.roots.size());
      for (const cplx& root : alg.roots) {
        ProductVectorHit h = make_hit(primary, root, false);
        if (!verified(h, options.verify_tol)) {
          const NullFit fit = refine_root(primary, root, 10);
          h = make_hit(primary, fit.g, false);
        }
        if (verified(h, options.verify_tol)) add_unique(hits, h);
      }
      const ProductVectorHit inf = make_hit(primary, 0.0, true);
      if (verified(inf, options.verify_tol)) add_unique(hits, inf);
      out.method = "eliminant";
      out.complete = true;
    }
  }
  if (!algebraic) {
    hits = seeded_search(primary, options.verify_tol);
    out.candidates = static_cast<int>(hits.size());
    out.method = "seeded";
    out.complete = false;
    *continuum = static_cast<int>(hits.size()) > 2 * (n - 1);
  }
  if (swap) conjugate_hits(hits, pencil);
  sort_hits(hits);
  out.hits = std::move(hits);
  return out;
}

}  // namespace

ProductVectorSearch find_product_vectors(const DensityMatrix& rho, const ProductVectorOptions& options) {
  bool continuum = false;
  ProductVectorSearch out = search_product_vectors(rho, options, &continuum);
  if (continuum) {
    throw Error(ErrorCode::DegenerateSystem, "product vectors form a continuum", static_cast<double>(out.hits.size()));
  }
  return out;
}

Determinant57 determinant_equation_57(const DensityMatrix& rho, const ProductVectorOptions& options) {
  if (rho.dim_a() != 2 || rho.dim_b() != 4) throw Error(ErrorCode::UnsupportedDimension, "the (5,7) equation is for 2 x 4");
  const Kernels k = kernels_of(rho, options.rank_tol);
  if (k.ker.cols() != 3 || k.ker_pt.cols() != 1) {
    throw Error(ErrorCode::RankMismatch, "needs kernel dimensions (3, 1)", static_cast<double>(k.ker.cols()));
  }
  const Pencil pencil = pencil_from(k, 4);

  // d(alpha) = W(alpha) + conj(alpha) V(alpha), W and V cubic.
  std::vector<cplx> wv(4), vv(4);
  ComplexMatrix sq(4, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    const cplx z = unit_root(j, 4);
    sq.topRows(3) = pencil.x0 + z * pencil.x1;
    sq.row(3) = pencil.y0.row(0);
    wv[j] = sq.determinant();
    sq.row(3) = pencil.y1.row(0);
    vv[j] = sq.determinant();
  }
  std::vector<cplx> w = interpolate_unit_circle(wv);
  std::vector<cplx> v = interpolate_unit_circle(vv);
  double top = 0.0;
  for (std::size_t j = 0; j < 4; ++j) top = std::max({top, std::abs(w[j]), std::abs(v[j])});
  for (std::size_t j = 0; j < 4; ++j) {
    w[j] /= top;
    v[j] /= top;
  }

  auto derivative = [](const std::vector<cplx>& c) {
    std::vector<cplx> d(c.size() - 1);
    for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = static_cast<double>(j) * c[j];
    return d;
  };

  const kernels::KernelTable& kt = kernels::active();
  Determinant57 out;
  std::vector<ProductVectorHit> found;
  int converged_distinct = 0;
  std::vector<std::pair<cplx, bool>> distinct;

  for (int chart = 0; chart < 2; ++chart) {
    // Chart 1 uses gamma = 1/alpha: V~(gamma) + conj(gamma) W~(gamma) = 0.
    const std::vector<cplx> a = chart == 0 ? w : std::vector<cplx>(v.rbegin(), v.rend());
    const std::vector<cplx> b = chart == 0 ? v : std::vector<cplx>(w.rbegin(), w.rend());
    const std::vector<cplx> da = derivative(a);
    const std::vector<cplx> db = derivative(b);
    std::vector<cplx> z = seed_grid(chart == 0 ? 10.0 : 1.0, 32);
    const std::size_t count = z.size();
    std::vector<cplx> av(count), bv(count), dav(count), dbv(count);
    std::vector<char> alive(count, 1);
    for (int it = 0; it < 60; ++it) {
      kt.poly_eval(a.data(), a.size(), z.data(), count, av.data());
      kt.poly_eval(b.data(), b.size(), z.data(), count, bv.data());
      kt.poly_eval(da.data(), da.size(), z.data(), count, dav.data());
      kt.poly_eval(db.data(), db.size(), z.data(), count, dbv.data());
      for (std::size_t i = 0; i < count; ++i) {
        if (!alive[i]) continue;
        const cplx d = av[i] + std::conj(z[i]) * bv[i];
        const cplx ga = dav[i] + std::conj(z[i]) * dbv[i];
        const cplx gb = bv[i];
        const double det = std::norm(ga) - std::norm(gb);
        if (det == 0.0 || !std::isfinite(det)) {
          alive[i] = 0;
          continue;
        }
        const cplx step = (-d * std::conj(ga) + gb * std::conj(d)) / det;
        z[i] += step;
        if (!std::isfinite(std::abs(z[i])) || std::abs(z[i]) > 1e8) alive[i] = 0;
      }
    }
    kt.poly_eval(a.data(), a.size(), z.data(), count, av.data());
    kt.poly_eval(b.data(), b.size(), z.data(), count, bv.data());
    for (std::size_t i = 0; i < count; ++i) {
      if (!alive[i]) continue;
      const double mag = std::abs(z[i]);
      const cplx d = av[i] + std::conj(z[i]) * bv[i];
      if (std::abs(d) > 1e-11 * std::pow(1.0 + mag, 4)) continue;
      if (chart == 1 && mag > 1.0) continue;  // already covered by the affine chart
      const bool inf = chart == 1 && mag < 1e-14;
      const cplx alpha = chart == 0 ? z[i] : (inf ? cplx(0.0) : 1.0 / z[i]);
      bool seen = false;
      for (const auto& [other, other_inf] : distinct) {
        if (chordal(alpha, inf, other, other_inf) < 1e-6) seen = true;
      }
      if (seen) continue;
      distinct.emplace_back(alpha, inf);
      Root57 root;
      root.alpha = alpha;
      root.at_infinity = inf;
      root.hit = make_hit(pencil, alpha, inf);
      root.verified = verified(root.hit, std::max(options.verify_tol, 1e-7));
      out.verified += root.verified ? 1 : 0;
      out.candidates.push_back(root);
      ++converged_distinct;
    }
  }
  (void)found;
  (void)converged_distinct;
  if (out.verified == 0) throw Error(ErrorCode::NoneFound, "no root of the (5,7) equation verified");
  return out;
}

SubtractionResult subtract_product_projector(const DensityMatrix& rho, const ProductVectorHit& hit, double tol) {
  ComplexVector x = hit.product();
  x /= x.norm();
  int rank = 0;
  const ComplexMatrix ker = kernel_of(rho.mat(), kDefaultTol, &rank);
  const double outside = (ker.adjoint() * x).norm();
  if (outside > tol) throw Error(ErrorCode::NotInRange, "product vector is not in the range of rho", outside);
  const ComplexMatrix pinv = hermitian_pinv(rho.mat(), kDefaultTol);
  const double weight = (x.adjoint() * pinv * x)(0, 0).real();
  SubtractionResult out{DensityMatrix::validate(rho.mat() - (1.0 / weight) * x * x.adjoint(), rho.dim_a(), rho.dim_b(),
                                                rho.tol(), true),
                        1.0 / weight, 0};
  // Rank of the remainder, measured against the scale of rho.
  const RealVector vals = hermitian_eigen(out.rho_prime.mat()).values;
  const double top = hermitian_eigen(rho.mat()).values[0];
  int rank_prime = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) rank_prime += vals[i] > kDefaultTol * top ? 1 : 0;
  out.rank_drop = rank - rank_prime;
  return out;
}

EdgeReport edge_state_test(const DensityMatrix& rho, const ProductVectorOptions& options) {
  const PptReport ppt = is_ppt(rho, options.rank_tol);
  if (!ppt.ppt) throw Error(ErrorCode::NotPPT, "edge states are PPT by definition", ppt.min_eigenvalue);
  EdgeReport out;
  bool continuum = false;
  out.search = search_product_vectors(rho, options, &continuum);
  if (!out.search.hits.empty()) {
    out.verdict = EdgeVerdict::NotEdge;
    out.witness = out.search.hits.front();
    return out;
  }
  if (!out.search.complete) {
    throw Error(ErrorCode::UnsupportedRankPattern, "search is not complete for this rank pattern");
  }
  out.verdict = EdgeVerdict::Edge;
  return out;
}

CriticalWeights critical_weights(const DensityMatrix& rho, const ComplexVector& e, const ComplexVector& f) {
  auto weight = [](const ComplexMatrix& h, const ComplexVector& x) {
    int rank = 0;
    const ComplexMatrix ker = kernel_of(h, kDefaultTol, &rank);
    if ((ker.adjoint() * x).norm() > 1e-8 * x.norm()) return 0.0;
    const double q = (x.adjoint() * hermitian_pinv(h, kDefaultTol) * x)(0, 0).real();
    return q > 0.0 ? 1.0 / q : 0.0;
  };
  ComplexVector x = kron(e, f);
  x /= x.norm();
  ComplexVector xs = kron(e.conjugate(), f);
  xs /= xs.norm();
  return {weight(rho.mat(), x), weight(partial_transpose(rho, Subsystem::A), xs)};
}

BalancedPoint balanced_product_vector(const DensityMatrix& rho, const ComplexVector& e0, const ComplexVector& f0,
                                      const ComplexVector& e1, const ComplexVector& f1) {
  auto point = [&](double t, ComplexVector* e, ComplexVector* f) {
    *e = (1.0 - t) * e0 + t * e1;
    *f = (1.0 - t) * f0 + t * f1;
    *e /= e->norm();
    *f /= f->norm();
    const CriticalWeights w = critical_weights(rho, *e, *f);
    return w.range - w.pt_range;
  };
  ComplexVector e, f;
  double lo = 0.0, hi = 1.0;
  const double g_lo = point(lo, &e, &f);
  const double g_hi = point(hi, &e, &f);
  if (g_lo == 0.0) return {0.0, e0 / e0.norm(), f0 / f0.norm(), critical_weights(rho, e0, f0).range};
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw Error(ErrorCode::NoSolution, "critical weights do not cross along the path", g_lo);
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = point(mid, &e, &f);
    if ((g > 0.0) == (g_lo > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  BalancedPoint out;
  out.t = 0.5 * (lo + hi);
  point(out.t, &out.e, &out.f);
  out.lambda = critical_weights(rho, out.e, out.f).range;
  return out;
}

}  // namespace sepgram
