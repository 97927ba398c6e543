// jointspec: characteristic polynomials, equivalence reports, curve samples
// and test tuples from the command line.
//
// Exit codes: 0 ok, 1 report carries a flag, 2 input error, 3 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "jointspec/jointspec.hpp"

namespace js = jointspec;

namespace {

enum Exit { kOk = 0, kFlagged = 1, kInput = 2, kNumeric = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double tol = 1e-7;
  std::uint64_t seed = 42;
  std::string grid = "-1:1:21";
  std::string out;
  std::string format = "json";
};

bool is_input_error(js::ErrorCode c) {
  switch (c) {
    case js::ErrorCode::DimensionMismatch:
    case js::ErrorCode::ArityMismatch:
    case js::ErrorCode::InvalidArgument:
    case js::ErrorCode::ZeroNormal:
    case js::ErrorCode::SingularC:
      return true;
    default:
      return false;
  }
}

js::TupleDocument read_document(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  js::Json j;
  try {
    j = js::Json::parse(text);
  } catch (const js::Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return js::parse_tuple_document(j);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw InputError("cannot write " + cfg.out);
  out << text;
}

void require_json(const RunConfig& cfg, const char* command) {
  if (cfg.format != "json") throw InputError(std::string(command) + " only writes json");
}

std::vector<js::Complex> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int count = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || !is.eof() || count < 1 ||
      count > 100000 || !(lo <= hi)) {
    throw InputError("grid must be lo:hi:count with lo <= hi and 1 <= count <= 100000");
  }
  std::vector<js::Complex> grid;
  for (int k = 0; k < count; ++k) grid.emplace_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  return grid;
}

int cmd_charpoly(const std::string& input, const RunConfig& cfg) {
  require_json(cfg, "charpoly");
  const auto doc = read_document(input);
  const js::OperatorTuple tuple(doc.matrices);
  const js::MultiPoly p = js::charpoly(tuple);

  // Self-check against direct determinants.
  js::Rng rng(cfg.seed);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const js::ComplexVector z = js::random_vector(tuple.arity(), rng);
    const js::Complex want = js::determinant(tuple.pencil(z));
    worst = std::max(worst, std::abs(js::evaluate(p, z) - want) / std::max(1.0, js::evaluate_majorant(p, z)));
  }
  std::cerr << "charpoly self-check: max relative error " << worst << " over 10 points\n";
  if (!(worst <= 1e-8)) {
    std::cerr << "charpoly self-check failed\n";
    return kNumeric;
  }
  emit(cfg, js::to_json(p).dump(2) + "\n");
  return kOk;
}

int cmd_analyze(const std::string& input, const RunConfig& cfg) {
  require_json(cfg, "analyze");
  const auto doc = read_document(input);
  js::AnalysisConfig ac;
  ac.tol = cfg.tol;
  ac.seed = cfg.seed;
  const auto report = js::equivalence_report(js::OperatorTuple(doc.matrices), ac);
  emit(cfg, js::to_json(report).dump(2) + "\n");
  return report.consistent && !report.non_normal_gap ? kOk : kFlagged;
}

int cmd_spectrum(const std::string& input, const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") throw InputError("format must be json or csv");
  const auto doc = read_document(input);
  if (doc.arity != 2) throw InputError("spectrum needs a pair (n = 2)");
  const auto sample = js::sample_curve(doc.matrices[0], doc.matrices[1], parse_grid(cfg.grid));
  if (cfg.format == "csv") {
    std::ostringstream os;
    js::write_curve_csv(os, sample);
    emit(cfg, os.str());
  } else {
    emit(cfg, js::to_json(sample).dump(2) + "\n");
  }
  return kOk;
}

int cmd_generate(const std::string& kind, int dim, int arity, const RunConfig& cfg) {
  require_json(cfg, "generate");
  if (dim < 1 || dim > 64 || arity < 1 || arity > 8) throw InputError("need 1 <= N <= 64 and 1 <= n <= 8");
  js::TupleDocument doc;
  doc.dim = dim;
  doc.arity = arity;
  js::Rng rng(cfg.seed);
  if (kind == "counterexample") {
    if (dim != 2 || arity != 2) throw InputError("counterexample is a 2x2 pair");
    js::ComplexMatrix a = js::ComplexMatrix::Zero(2, 2), b(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    b << 3.0, 0.0, 4.0, 5.0;
    doc.matrices = {a, b};
  } else if (kind == "commuting-normal") {
    doc.matrices = js::commuting_normal(dim, arity, rng).matrices;
    doc.seed = cfg.seed;
  } else if (kind == "random-normal") {
    doc.matrices = js::independent_normal(dim, arity, rng);
    doc.seed = cfg.seed;
  } else if (kind == "random") {
    for (int j = 0; j < arity; ++j) doc.matrices.push_back(js::random_matrix(dim, rng));
    doc.seed = cfg.seed;
  } else {
    throw InputError("unknown kind " + kind);
  }
  emit(cfg, js::to_json(doc).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint spectra of matrix tuples"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--tol", cfg.tol, "Tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--grid", cfg.grid, "w grid lo:hi:count for spectrum")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--format", cfg.format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));

  std::string input;
  auto* charpoly = app.add_subcommand("charpoly", "Characteristic polynomial det(I + sum z_k A_k)");
  charpoly->add_option("input", input, "Tuple document ('-' for stdin)")->required();
  auto* analyze = app.add_subcommand("analyze", "Commutativity / reducibility / hyperplane report");
  analyze->add_option("input", input, "Tuple document ('-' for stdin)")->required();
  auto* spectrum = app.add_subcommand("spectrum", "Sample the curve det(I + zA + wB) = 0 over a w grid");
  spectrum->add_option("input", input, "Pair document ('-' for stdin)")->required();

  std::string kind;
  int dim = 2, arity = 2;
  auto* generate = app.add_subcommand("generate", "Emit a test tuple");
  generate->add_option("kind", kind, "commuting-normal | random-normal | random | counterexample")->required();
  generate->add_option("-N,--dim", dim, "Matrix size")->capture_default_str();
  generate->add_option("-n,--arity", arity, "Tuple length")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*charpoly) return cmd_charpoly(input, cfg);
    if (*analyze) return cmd_analyze(input, cfg);
    if (*spectrum) return cmd_spectrum(input, cfg);
    return cmd_generate(kind, dim, arity, cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const js::SpectralError& e) {
    std::cerr << "error: " << js::to_string(e.code()) << ": " << e.what() << '\n';
    return is_input_error(e.code()) ? kInput : kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}
