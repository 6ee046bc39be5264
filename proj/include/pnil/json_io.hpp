#pragma once

#include <string>

#include <json.hpp>

#include "pnil/certify.hpp"
#include "pnil/groupchain.hpp"
#include "pnil/ncomplex.hpp"
#include "pnil/pdg.hpp"

namespace pnil {

using Json = nlohmann::ordered_json;

// Field elements are coefficient arrays, polynomials term lists
// [{"e": [exponents], "c": [coeffs]}], matrices row-major nested arrays.
// Every top-level document carries "format": 1 and a "type" tag.

Json field_to_json(const FieldSpecPtr& spec);
FieldSpecPtr field_from_json(const Json& j);

Json elem_to_json(const FieldElem& a);
FieldElem elem_from_json(const Json& j, const FieldSpecPtr& spec);

Json multipoly_to_json(const MultiPoly& f);
MultiPoly multipoly_from_json(const Json& j, const FieldSpecPtr& spec, int n);

Json truncpoly_to_json(const TruncPoly& f);
TruncPoly truncpoly_from_json(const Json& j, const FieldSpecPtr& spec, int n, int p);

Json ncomplex_to_json(const NComplexFin& C);
NComplexFin ncomplex_from_json(const Json& j);

Json kgcomplex_to_json(const KGComplex& C);
KGComplex kgcomplex_from_json(const Json& j);

Json pdg_to_json(const PDGModule& M);
PDGModule pdg_from_json(const Json& j);

Json certificate_to_json(const Certificate& C);
Certificate certificate_from_json(const Json& j);

Json cert_report_to_json(const CertReport& r);
Json bound_report_to_json(const BoundReport& r);
Json comp_series_to_json(const CompositionSeries& cs);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

/// "type" field of a loaded document; empty string when missing.
std::string json_doc_type(const Json& j);

}  // namespace pnil
