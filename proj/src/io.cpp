#include "sepgram/io.hpp"

#include "sepgram/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sepgram::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) parse_error(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

json to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_error("complex entries must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexVector vector_from_json(const json& j) {
  if (!j.is_array()) parse_error("expected a list of complex numbers");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) parse_error("expected a list of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) parse_error("rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

json state_to_json(const DensityMatrix& rho) {
  return json{{"m", rho.dim_a()}, {"n", rho.dim_b()}, {"unnormalized", rho.unnormalized()}, {"data", to_json(rho.mat())}};
}

DensityMatrix state_from_json(const json& j, double tol) {
  const int m = int_field(j, "m");
  const int n = int_field(j, "n");
  bool unnormalized = false;
  if (j.contains("unnormalized")) {
    if (!j["unnormalized"].is_boolean()) parse_error("\"unnormalized\" must be a boolean");
    unnormalized = j["unnormalized"].get<bool>();
  }
  const ComplexMatrix data = matrix_from_json(field(j, "data"));
  if (data.rows() != data.cols()) parse_error("state data is not square");
  return DensityMatrix::validate(data, m, n, tol, unnormalized);
}

json gram_to_json(const GramSystem& g) {
  json vectors = json::object();
  for (int i = 0; i < g.dims().m; ++i) {
    for (int jj = 0; jj < g.dims().n; ++jj) vectors[std::to_string(i) + "," + std::to_string(jj)] = to_json(g.w(i, jj));
  }
  return json{{"m", g.dims().m}, {"n", g.dims().n}, {"k", g.k()}, {"vectors", std::move(vectors)}};
}

json certificate_to_json(const DiagonalGramCertificate& c) {
  json d = json::array();
  for (Eigen::Index m = 0; m < c.d.cols(); ++m) d.push_back(to_json(ComplexVector(c.d.col(m))));
  json v = json::array();
  for (Eigen::Index n = 0; n < c.v.cols(); ++n) v.push_back(to_json(ComplexVector(c.v.col(n))));
  json out{{"m", c.dims.m}, {"n", c.dims.n}, {"k", c.k()}, {"d", std::move(d)}, {"v", std::move(v)}};
  if (c.a_basis) out["a_basis"] = to_json(*c.a_basis);
  return out;
}

DiagonalGramCertificate certificate_from_json(const json& j) {
  const int k = int_field(j, "k");
  const json& d = field(j, "d");
  const json& v = field(j, "v");
  if (!d.is_array() || !v.is_array()) parse_error("\"d\" and \"v\" must be lists");
  DiagonalGramCertificate c;
  c.dims.m = j.contains("m") ? int_field(j, "m") : static_cast<int>(d.size());
  c.dims.n = j.contains("n") ? int_field(j, "n") : static_cast<int>(v.size());
  if (static_cast<int>(d.size()) != c.dims.m || static_cast<int>(v.size()) != c.dims.n) {
    parse_error("certificate lists do not match m and n");
  }
  c.d.resize(k, c.dims.m);
  c.v.resize(k, c.dims.n);
  for (int m = 0; m < c.dims.m; ++m) {
    const ComplexVector col = vector_from_json(d[m]);
    if (col.size() != k) parse_error("diagonal length differs from k");
    c.d.col(m) = col;
  }
  for (int n = 0; n < c.dims.n; ++n) {
    const ComplexVector col = vector_from_json(v[n]);
    if (col.size() != k) parse_error("frame vector length differs from k");
    c.v.col(n) = col;
  }
  if (j.contains("a_basis")) {
    const ComplexMatrix basis = matrix_from_json(j["a_basis"]);
    if (basis.rows() != c.dims.m || basis.cols() != c.dims.m) parse_error("a_basis must be m x m");
    c.a_basis = basis;
  }
  return c;
}

json hits_to_json(const ProductVectorSearch& s) {
  json hits = json::array();
  for (const ProductVectorHit& h : s.hits) {
    json hit{{"alpha", to_json(h.alpha)},
             {"at_infinity", h.at_infinity},
             {"e", to_json(h.e)},
             {"f", to_json(h.f)},
             {"residuals", {{"range", h.residual_range}, {"pt_range", h.residual_pt_range}}}};
    hits.push_back(std::move(hit));
  }
  return json{{"hits", std::move(hits)},
              {"case", "(" + std::to_string(s.rank) + "," + std::to_string(s.rank_pt) + ")"},
              {"kernel", {s.kernel, s.kernel_pt}},
              {"complete", s.complete},
              {"candidates", s.candidates},
              {"method", s.method}};
}

json canonical_to_json(const CanonicalForm2xN& cf) {
  return json{{"n", cf.n},
              {"a", to_json(cf.a)},
              {"b", to_json(cf.b)},
              {"t", to_json(cf.t)},
              {"lambda", to_json(cf.lam)},
              {"lambda_tilde", to_json(cf.lam_tilde)},
              {"p", cf.p},
              {"p_tilde", cf.p_tilde},
              {"ppt", cf.ppt},
              {"min_eigenvalue_ppt_block", cf.min_eig_ppt_block}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) parse_error("cannot write " + path);
  out << text;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_error(e.what());
  }
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sepgram::io
