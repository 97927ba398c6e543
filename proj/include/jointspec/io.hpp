#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jointspec/commute.hpp"
#include "jointspec/perturb.hpp"

namespace jointspec {

using Json = nlohmann::json;

/// {"N": int, "n": int, "matrices": [[[ [re, im], ... ], ...], ...],
///  "labels": [...], "seed": int}; plain numbers are accepted as real entries.
struct TupleDocument {
  int dim = 0;
  int arity = 0;
  std::vector<ComplexMatrix> matrices;
  std::vector<std::string> labels;
  std::optional<std::uint64_t> seed;
};

/// Throws SpectralError(InvalidArgument) on malformed documents.
TupleDocument parse_tuple_document(const Json& j);
Json to_json(const TupleDocument& doc);

Json to_json(Complex c);
Json to_json(const ComplexVector& v);
Json to_json(const ComplexMatrix& m);

/// {"arity": n, "terms": [{"exp": [...], "re": x, "im": y}, ...]} in
/// lexicographic exponent order.
Json to_json(const MultiPoly& p);
MultiPoly multipoly_from_json(const Json& j);

/// {"verdict": ..., "residual": r, "factors": [{"coeffs": [[re, im], ...], "mult": m}]}
Json to_json(const LinearFactorization& f);
Json to_json(const HyperplaneCheck& h);
Json to_json(const EquivalenceReport& r);
Json to_json(const JointDiagonalization& d);
Json to_json(const NormalityReport& r);
Json to_json(const PairReducibility& p);
Json to_json(const CompleteCommutativityReport& r);
Json to_json(const PerturbationProbe& p);
Json to_json(const TangentReport& t);

inline constexpr const char* kCurveCsvHeader = "w_re,w_im,z_re,z_im,residual,multiple_flag";

/// One row per (w, root) under kCurveCsvHeader.
void write_curve_csv(std::ostream& os, const CurveSample& sample);
Json to_json(const CurveSample& sample);

}  // namespace jointspec
