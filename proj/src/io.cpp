#include "jointspec/io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace jointspec {

namespace {

[[noreturn]] void bad(const std::string& what) { throw SpectralError(ErrorCode::InvalidArgument, what); }

Complex parse_entry(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  bad("matrix entries must be numbers or [re, im] pairs");
}

// JSON has no infinities; they are written as null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

TupleDocument parse_tuple_document(const Json& j) {
  if (!j.is_object()) bad("tuple document must be a JSON object");
  if (!j.contains("N") || !j["N"].is_number_integer()) bad("missing integer field N");
  if (!j.contains("n") || !j["n"].is_number_integer()) bad("missing integer field n");
  if (!j.contains("matrices") || !j["matrices"].is_array()) bad("missing array field matrices");

  TupleDocument doc;
  doc.dim = j["N"].get<int>();
  doc.arity = j["n"].get<int>();
  if (doc.dim < 1 || doc.arity < 1) bad("N and n must be positive");
  const auto& ms = j["matrices"];
  if (static_cast<int>(ms.size()) != doc.arity) bad("matrix count differs from n");
  for (const auto& m : ms) {
    if (!m.is_array() || static_cast<int>(m.size()) != doc.dim) bad("each matrix needs N rows");
    ComplexMatrix mat(doc.dim, doc.dim);
    for (int r = 0; r < doc.dim; ++r) {
      const auto& row = m[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != doc.dim) bad("each row needs N entries");
      for (int c = 0; c < doc.dim; ++c) mat(r, c) = parse_entry(row[static_cast<std::size_t>(c)]);
    }
    if (!mat.allFinite()) bad("matrix entries must be finite");
    doc.matrices.push_back(std::move(mat));
  }
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) bad("labels must be an array");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) bad("labels must be strings");
      doc.labels.push_back(l.get<std::string>());
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed must be a nonnegative integer");
    doc.seed = j["seed"].get<std::uint64_t>();
  }
  return doc;
}

Json to_json(const TupleDocument& doc) {
  Json j;
  j["N"] = doc.dim;
  j["n"] = doc.arity;
  j["matrices"] = Json::array();
  for (const auto& m : doc.matrices) j["matrices"].push_back(to_json(m));
  if (!doc.labels.empty()) j["labels"] = doc.labels;
  if (doc.seed) j["seed"] = *doc.seed;
  return j;
}

Json to_json(Complex c) { return Json::array({number(c.real()), number(c.imag())}); }

Json to_json(const ComplexVector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(to_json(v(i)));
  return j;
}

Json to_json(const ComplexMatrix& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    j.push_back(std::move(row));
  }
  return j;
}

Json to_json(const MultiPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back({{"exp", e}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"arity", p.arity()}, {"terms", std::move(terms)}};
}

MultiPoly multipoly_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("arity") || !j.contains("terms")) bad("polynomial needs arity and terms");
  MultiPoly p(j["arity"].get<int>());
  for (const auto& t : j["terms"]) {
    p.add_term(t.at("exp").get<std::vector<int>>(), {t.at("re").get<double>(), t.at("im").get<double>()});
  }
  return p;
}

Json to_json(const LinearFactorization& f) {
  Json factors = Json::array();
  for (const auto& factor : f.factors) {
    factors.push_back({{"coeffs", to_json(factor.coeffs)}, {"mult", factor.multiplicity}});
  }
  Json j = {{"verdict", std::string(to_string(f.verdict))}, {"residual", number(f.residual)}, {"factors", factors}};
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

Json to_json(const HyperplaneCheck& h) {
  return {{"contained", h.contained},
          {"max_witness", h.max_witness},
          {"max_relative_witness", h.max_relative_witness},
          {"max_poly_residual", h.max_poly_residual},
          {"samples", h.samples}};
}

Json to_json(const EquivalenceReport& r) {
  Json hyper = Json::array();
  for (const auto& h : r.hyperplanes) hyper.push_back(to_json(h));
  return {{"schema", "jointspec.equivalence/1"},
          {"direct", r.direct},
          {"direct_relative", r.direct_relative},
          {"commute", r.commute},
          {"all_normal", r.all_normal},
          {"reducibility", to_json(r.reducibility)},
          {"reducible", r.reducible},
          {"hyperplanes", hyper},
          {"hyperplanes_ok", r.hyperplanes_ok},
          {"non_normal_gap", r.non_normal_gap},
          {"consistent", r.consistent}};
}

Json to_json(const JointDiagonalization& d) {
  Json diags = Json::array();
  for (const auto& v : d.diagonals) diags.push_back(to_json(v));
  return {{"schema", "jointspec.joint_diagonalization/1"},
          {"unitary", to_json(d.unitary)},
          {"diagonals", diags},
          {"residual", d.residual}};
}

Json to_json(const NormalityReport& r) {
  Json j = {{"schema", "jointspec.normality/1"},
            {"direct_defect", r.direct_defect},
            {"direct_normal", r.direct_normal},
            {"spectral_normal", r.spectral_normal},
            {"agree", r.agree}};
  j["pair"] = r.pair ? to_json(*r.pair) : Json(nullptr);
  return j;
}

Json to_json(const PairReducibility& p) {
  return {{"label", p.label},
          {"verdict", std::string(to_string(p.verdict))},
          {"residual", number(p.residual)},
          {"reducible", p.reducible}};
}

Json to_json(const CompleteCommutativityReport& r) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs) pairs.push_back(to_json(p));
  Json j = {{"schema", "jointspec.complete_commutativity/1"},
            {"pairs", pairs},
            {"spectral", r.spectral},
            {"commutator", r.commutator},
            {"adjoint_commutator", r.adjoint_commutator},
            {"direct", r.direct},
            {"agree", r.agree}};
  j["four_tuple"] = r.four_tuple ? to_json(*r.four_tuple) : Json(nullptr);
  return j;
}

Json to_json(const PerturbationProbe& p) {
  Json central = Json::array(), rich = Json::array();
  for (auto c : p.central_differences) central.push_back(to_json(c));
  for (auto c : p.richardson) rich.push_back(to_json(c));
  return {{"schema", "jointspec.perturbation/1"},
          {"lambda", to_json(p.lambda)},
          {"multiplicity", p.multiplicity},
          {"v", to_json(p.v)},
          {"inner", to_json(p.inner)},
          {"epsilons", p.epsilons},
          {"central_differences", central},
          {"richardson", rich},
          {"fd_derivative", to_json(p.fd_derivative)},
          {"p0_rank", p.p0_rank},
          {"discrepancy", p.discrepancy},
          {"agree", p.agree}};
}

Json to_json(const TangentReport& t) {
  Json central = Json::array();
  for (auto c : t.central_differences) central.push_back(to_json(c));
  return {{"schema", "jointspec.tangent/1"},
          {"mu", to_json(t.mu)},
          {"phi_prime", to_json(t.phi_prime)},
          {"implicit_phi_prime", to_json(t.implicit_phi_prime)},
          {"steps", t.steps},
          {"central_differences", central},
          {"inner", to_json(t.inner)},
          {"discrepancy", t.discrepancy},
          {"agree", t.agree}};
}

void write_curve_csv(std::ostream& os, const CurveSample& sample) {
  os << kCurveCsvHeader << '\n';
  const auto old = os.precision(17);
  for (const auto& r : sample.rows) {
    os << r.w.real() << ',' << r.w.imag() << ',' << r.z.real() << ',' << r.z.imag() << ',' << r.residual << ','
       << (r.multiple ? 1 : 0) << '\n';
  }
  os.precision(old);
}

Json to_json(const CurveSample& sample) {
  Json rows = Json::array();
  for (const auto& r : sample.rows) {
    rows.push_back({{"w", to_json(r.w)}, {"z", to_json(r.z)}, {"residual", r.residual}, {"multiple", r.multiple}});
  }
  return {{"schema", "jointspec.curve/1"}, {"rows", rows}, {"dropped_at_infinity", sample.dropped_at_infinity}};
}

}  // namespace jointspec
