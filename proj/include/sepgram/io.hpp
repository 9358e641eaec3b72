#pragma once

// JSON encodings. Complex numbers are [re, im] pairs and matrices are lists of
// rows. Malformed input raises Error(ParseError).

#include "sepgram/provec.hpp"
#include "sepgram/sep.hpp"
#include "sepgram/twoxn.hpp"

#include <json.hpp>

#include <string>

namespace sepgram::io {

using json = nlohmann::json;

json to_json(cplx z);
json to_json(const ComplexVector& v);
json to_json(const ComplexMatrix& m);  // row-major list of rows

cplx complex_from_json(const json& j);
ComplexVector vector_from_json(const json& j);
ComplexMatrix matrix_from_json(const json& j);  // rejects ragged rows

// {"m", "n", "unnormalized", "data"}
json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j, double tol = kDefaultTol);

// {"k", "vectors": {"m,n": [...]}}
json gram_to_json(const GramSystem& g);

// {"m", "n", "k", "d": [diag of D_m per m], "v": [v_n per n], "a_basis"?}
json certificate_to_json(const DiagonalGramCertificate& c);
DiagonalGramCertificate certificate_from_json(const json& j);

// {"hits": [...], "case": "(r,r')", ...}
json hits_to_json(const ProductVectorSearch& s);

json canonical_to_json(const CanonicalForm2xN& cf);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
json parse(const std::string& text);

// FNV-1a 64 of the raw bytes, as 16 hex digits.
std::string digest(const std::string& bytes);

}  // namespace sepgram::io
