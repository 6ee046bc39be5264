#include "pnil/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace pnil {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument("json: " + what);
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(elem_to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const FieldSpecPtr& spec, int rows, int cols) {
  Matrix m(spec, rows, cols);
  require(static_cast<int>(j.size()) == rows, "matrix row count mismatch");
  for (int i = 0; i < rows; ++i) {
    require(static_cast<int>(j[i].size()) == cols, "matrix column count mismatch");
    for (int c = 0; c < cols; ++c) m.set(i, c, elem_from_json(j[i][c], spec));
  }
  return m;
}

}  // namespace

Json field_to_json(const FieldSpecPtr& spec) {
  Json j;
  j["p"] = spec->p;
  j["m"] = spec->m;
  j["modulus"] = spec->modulus;
  return j;
}

FieldSpecPtr field_from_json(const Json& j) {
  require(j.contains("p") && j.contains("m"), "field spec needs p and m");
  FieldSpecPtr spec = field_make(j["p"].get<u64>(), j["m"].get<int>());
  if (j.contains("modulus"))
    require(spec->modulus == j["modulus"].get<std::vector<u64>>(),
            "modulus does not match the deterministic choice for (p, m)");
  return spec;
}

Json elem_to_json(const FieldElem& a) { return Json(a.coeffs()); }

FieldElem elem_from_json(const Json& j, const FieldSpecPtr& spec) {
  require(j.is_array(), "field element must be a coefficient array");
  return FieldElem(spec, j.get<std::vector<u64>>());
}

Json multipoly_to_json(const MultiPoly& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) {
    Json t;
    t["e"] = e;
    t["c"] = elem_to_json(c);
    terms.push_back(t);
  }
  return terms;
}

MultiPoly multipoly_from_json(const Json& j, const FieldSpecPtr& spec, int n) {
  MultiPoly f(spec, n);
  require(j.is_array(), "polynomial must be a term array");
  for (const auto& t : j)
    f.add_term(t.at("e").get<Exponents>(), elem_from_json(t.at("c"), spec));
  return f;
}

Json truncpoly_to_json(const TruncPoly& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) {
    Json t;
    t["e"] = e;
    t["c"] = elem_to_json(c);
    terms.push_back(t);
  }
  return terms;
}

TruncPoly truncpoly_from_json(const Json& j, const FieldSpecPtr& spec, int n, int p) {
  TruncPoly f(spec, n, p);
  require(j.is_array(), "truncated polynomial must be a term array");
  for (const auto& t : j)
    f.add_term(t.at("e").get<Exponents>(), elem_from_json(t.at("c"), spec));
  return f;
}

Json ncomplex_to_json(const NComplexFin& C) {
  Json j;
  j["format"] = 1;
  j["type"] = "ncomplex";
  j["N"] = C.ctx.N;
  j["field"] = field_to_json(C.ctx.spec);
  j["q"] = elem_to_json(C.ctx.q);
  Json dims = Json::object();
  for (const auto& [l, n] : C.dims)
    if (n > 0) dims[std::to_string(l)] = n;
  j["dims"] = dims;
  Json d = Json::object();
  for (const auto& [l, m] : C.d)
    if (m.rows() > 0 && m.cols() > 0) d[std::to_string(l)] = matrix_to_json(m);
  j["d"] = d;
  return j;
}

NComplexFin ncomplex_from_json(const Json& j) {
  require(json_doc_type(j) == "ncomplex", "expected an ncomplex document");
  FieldSpecPtr spec = field_from_json(j.at("field"));
  QContext ctx(spec, elem_from_json(j.at("q"), spec), j.at("N").get<int>());
  NComplexFin C(ctx);
  for (const auto& [key, val] : j.at("dims").items()) C.dims[std::stoi(key)] = val.get<int>();
  for (const auto& [key, val] : j.at("d").items()) {
    int l = std::stoi(key);
    C.d.emplace(l, matrix_from_json(val, spec, C.dim(l - 1), C.dim(l)));
  }
  return C;
}

Json kgcomplex_to_json(const KGComplex& C) {
  Json j;
  j["format"] = 1;
  j["type"] = "perfect_complex";
  j["p"] = C.p;
  j["n"] = C.n;
  j["nilpotency"] = C.nilpotency;
  j["field"] = field_to_json(C.spec);
  Json ranks = Json::object();
  for (const auto& [l, r] : C.ranks)
    if (r > 0) ranks[std::to_string(l)] = r;
  j["ranks"] = ranks;
  Json d = Json::object();
  for (const auto& [l, m] : C.d) {
    if (m.rows() == 0 || m.cols() == 0) continue;
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(truncpoly_to_json(m.at(i, c)));
      rows.push_back(row);
    }
    d[std::to_string(l)] = rows;
  }
  j["d"] = d;
  return j;
}

KGComplex kgcomplex_from_json(const Json& j) {
  require(json_doc_type(j) == "perfect_complex", "expected a perfect_complex document");
  KGComplex C;
  C.p = j.at("p").get<int>();
  C.n = j.at("n").get<int>();
  C.nilpotency = j.contains("nilpotency") ? j.at("nilpotency").get<int>() : 2;
  C.spec = j.contains("field") ? field_from_json(j.at("field"))
                               : field_make(static_cast<u64>(C.p), 1);
  for (const auto& [key, val] : j.at("ranks").items()) C.ranks[std::stoi(key)] = val.get<int>();
  for (const auto& [key, val] : j.at("d").items()) {
    int l = std::stoi(key);
    TruncMatrix m(C.spec, C.n, C.p, C.rank(l - 1), C.rank(l));
    require(static_cast<int>(val.size()) == m.rows(), "differential row count mismatch");
    for (int i = 0; i < m.rows(); ++i) {
      require(static_cast<int>(val[i].size()) == m.cols(), "differential column count mismatch");
      for (int c = 0; c < m.cols(); ++c)
        m.set(i, c, truncpoly_from_json(val[i][c], C.spec, C.n, C.p));
    }
    C.d.emplace(l, std::move(m));
  }
  return C;
}

namespace {

Json polymatrix_sparse_json(const PolyMatrix& D) {
  Json entries = Json::array();
  for (int i = 0; i < D.rows(); ++i)
    for (int j = 0; j < D.cols(); ++j) {
      if (D.at(i, j).is_zero()) continue;
      Json e;
      e["i"] = i;
      e["j"] = j;
      e["f"] = multipoly_to_json(D.at(i, j));
      entries.push_back(e);
    }
  return entries;
}

PolyMatrix polymatrix_sparse_from_json(const Json& j, const FieldSpecPtr& spec, int n, int size) {
  PolyMatrix D(spec, n, size, size);
  for (const auto& e : j) {
    int i = e.at("i").get<int>(), jj = e.at("j").get<int>();
    require(i >= 0 && i < size && jj >= 0 && jj < size, "sparse entry out of range");
    D.set(i, jj, multipoly_from_json(e.at("f"), spec, n));
  }
  return D;
}

}  // namespace

Json pdg_to_json(const PDGModule& M) {
  Json j;
  j["format"] = 1;
  j["type"] = "pdg_module";
  j["p"] = M.p;
  j["n"] = M.n;
  j["field"] = field_to_json(M.spec);
  j["c"] = M.c;
  j["D"] = polymatrix_sparse_json(M.D);
  return j;
}

PDGModule pdg_from_json(const Json& j) {
  std::string ty = json_doc_type(j);
  require(ty == "pdg_module" || ty == "certificate", "expected a pdg_module document");
  PDGModule M;
  M.p = j.at("p").get<int>();
  M.n = j.at("n").get<int>();
  M.spec = j.contains("field") ? field_from_json(j.at("field"))
                               : field_make(static_cast<u64>(M.p), 1);
  M.c = j.at("c").get<std::vector<int>>();
  M.D = polymatrix_sparse_from_json(j.at("D"), M.spec, M.n, M.size());
  return M;
}

Json certificate_to_json(const Certificate& C) {
  Json j;
  j["format"] = 1;
  j["type"] = "certificate";
  j["p"] = C.p;
  j["n"] = C.n;
  j["field"] = field_to_json(C.spec);
  j["c"] = C.c;
  j["D"] = polymatrix_sparse_json(C.D);
  return j;
}

Certificate certificate_from_json(const Json& j) {
  std::string ty = json_doc_type(j);
  require(ty == "certificate" || ty == "pdg_module", "expected a certificate document");
  Certificate C;
  C.p = j.at("p").get<int>();
  C.n = j.at("n").get<int>();
  C.spec = j.contains("field") ? field_from_json(j.at("field"))
                               : field_make(static_cast<u64>(C.p), 1);
  C.c = j.at("c").get<std::vector<int>>();
  C.D = polymatrix_sparse_from_json(j.at("D"), C.spec, C.n, C.size());
  return C;
}

Json cert_report_to_json(const CertReport& r) {
  Json j;
  j["format"] = 1;
  j["type"] = "certificate_report";
  j["pass"] = r.pass();
  j["verdicts"] = {{"homogeneous", r.homogeneous},
                   {"p_nilpotent", r.p_nilpotent},
                   {"strictly_upper_triangular", r.strictly_upper},
                   {"zero_fiber_nilpotent", r.zero_fiber_nilpotent},
                   {"rank_condition", r.rank_condition},
                   {"size_divisible_by_p", r.size_divisible}};
  j["rank_target"] = r.rank_target;
  j["fields_exhausted"] = r.fields_exhausted;
  j["exhaustive_points"] = r.exhaustive_points;
  j["random_points"] = r.random_points;
  j["random_field_degree"] = r.random_field_degree;
  j["sz_bound_per_trial"] = r.sz_bound_per_trial;
  j["sz_bound_aggregate"] = r.sz_bound_aggregate;
  if (!r.failure_witness.empty()) j["failure_witness"] = r.failure_witness;
  return j;
}

Json bound_report_to_json(const BoundReport& r) {
  Json j;
  j["format"] = 1;
  j["type"] = "bound_report";
  j["ell"] = r.ell;
  j["dim_h_even"] = r.dim_h_even;
  j["dim_h_odd"] = r.dim_h_odd;
  j["dim_h_total"] = r.dim_h_even + r.dim_h_odd;
  j["euler"] = r.chi;
  if (r.chi == 0) j["chi_zero_identity"] = r.chi_zero_identity;
  if (r.composition_size >= 0) j["composition_size"] = r.composition_size;
  return j;
}

Json comp_series_to_json(const CompositionSeries& cs) {
  Json j;
  j["format"] = 1;
  j["type"] = "composition_series";
  j["module"] = pdg_to_json(cs.module);
  j["length"] = cs.length();
  j["socle_rounds"] = cs.socle_rounds;
  Json steps = Json::array();
  for (const auto& st : cs.steps) {
    Json s;
    s["degree"] = st.degree;
    s["s"] = st.s;
    s["generators"] = st.gens;
    s["kind"] = std::string(1, st.kind);
    steps.push_back(s);
  }
  j["steps"] = steps;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string json_doc_type(const Json& j) {
  if (j.is_object() && j.contains("type") && j["type"].is_string())
    return j["type"].get<std::string>();
  return "";
}

}  // namespace pnil
