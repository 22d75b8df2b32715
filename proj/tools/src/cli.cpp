#include "steinkit_cli/cli.hpp"

#ifdef STEINKIT_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "steinkit/blockdiag.hpp"
#include "steinkit/codim2.hpp"
#include "steinkit/flat.hpp"
#include "steinkit/generators.hpp"
#include "steinkit/jacobi.hpp"
#include "steinkit/json_io.hpp"
#include "steinkit/oracle.hpp"
#include "steinkit/veronese.hpp"

namespace steinkit::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  int samples = 500;
  std::string format = "text";
  std::string out;
};

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

bool is_flat_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& e : j)
    if (e.is_object() || e.is_array()) return false;
  return true;
}

// One `key: value` line per leaf; nested keys are joined with dots.
void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  if (j.is_array() && !is_flat_array(j)) {
    bool objects = false;
    for (const auto& e : j) objects = objects || e.is_object();
    if (objects) {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
      return;
    }
  }
  os << prefix << ": ";
  if (j.is_number_float()) {
    os << format_number(j.get<double>());
  } else if (j.is_string()) {
    os << j.get<std::string>();
  } else {
    os << j.dump();
  }
  os << '\n';
}

std::string render(Json report, const std::string& command, const Common& c) {
  if (c.format == "json") {
    Json doc = {{"schema", kSchemaVersion}, {"command", command}};
    doc.update(report);
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  flatten(report, "", os);
  return os.str();
}

void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_file_atomic(c.out, text);
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return kIoError;
  if (dynamic_cast<const MalformedJson*>(&e)) return kMalformedJson;
  if (dynamic_cast<const SchemaError*>(&e)) return kSchemaError;
  return kNumericalError;
}

std::string error_name(const std::exception& e) {
  if (dynamic_cast<const IoError*>(&e)) return "I/O error";
  if (dynamic_cast<const MalformedJson*>(&e)) return "malformed JSON";
  if (dynamic_cast<const SchemaError*>(&e)) return "schema error";
  if (dynamic_cast<const NotAPencil*>(&e)) return "NotAPencil";
  if (dynamic_cast<const NotCommuting*>(&e)) return "NotCommuting";
  if (dynamic_cast<const NotEinstein*>(&e)) return "NotEinstein";
  if (dynamic_cast<const MultiplicityMismatch*>(&e)) return "MultiplicityMismatch";
  if (dynamic_cast<const ConvergenceFailure*>(&e)) return "ConvergenceFailure";
  if (dynamic_cast<const IllConditioned*>(&e)) return "IllConditioned";
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
  return "error";
}

Json check_report(const ShapeFamily& f) {
  Json j = to_json(two_stein_check(f));
  j["n"] = f.n();
  j["p"] = f.p();
  j["c"] = f.c();
  return j;
}

Json blockdiag_report(const ShapeFamily& f, bool traceless, double tol) {
  if (f.p() != 2) throw DimensionMismatch("blockdiag: input must hold exactly two operators");
  Json j;
  std::optional<PencilPair> pencil;
  if (traceless) {
    TracelessParts tp = traceless_parts(f, tol);
    j["H1"] = tp.H1;
    j["H2"] = tp.H2;
    j["c1"] = tp.c1;
    pencil = tp.pencil;
  } else {
    pencil = verify_sum_of_squares(f.op(0), f.op(1), tol);
  }
  const BlockStructure b = simultaneous_block_diagonalize(*pencil, tol);
  j.update(to_json(b));
  j["pair_count"] = b.pair_count();
  j["reconstruction_error"] = reconstruction_error(b, *pencil);
  return j;
}

Json flat_report(const ShapeFamily& f, const Common& c) {
  const FlatDiagonalization d = simultaneous_diagonalize(f, c.tol, c.seed);
  FlatReport r = flat_identities(d);
  if (r.two_stein(c.tol)) r = constant_curvature_conclusion(f, r, c.samples, c.seed, c.tol);
  Json j = to_json(r);
  j["two_stein"] = r.two_stein(c.tol);
  j["lambdas"] = to_json(d.lambdas);
  return j;
}

Json theorem_report(const ShapeFamily& f, const Common& c) {
  return to_json(analyze(f, AnalyzeOptions{c.tol, c.samples, c.seed}));
}

Json veronese_report(const std::vector<double>& z, double h, const Common& c) {
  if (z.size() != 6) throw DimensionMismatch("veronese: --z takes 6 numbers (re, im) x 3");
  Complex3 v;
  for (int k = 0; k < 3; ++k) v(k) = {z[static_cast<std::size_t>(2 * k)], z[static_cast<std::size_t>(2 * k + 1)]};
  const ShapeFamily f = veronese_family(v, h);
  const SectionalSweep sweep = sectional_extremes(f, c.samples, c.seed);
  Json j;
  j["realification"] = "diag(3), sqrt2*Re(01,02,12), sqrt2*Im(01,02,12)";
  j["step"] = h;
  j["family"] = to_json(f);
  j["two_stein"] = to_json(two_stein_check(f));
  j["sectional"] = to_json(sweep);
  j["sectional_ratio"] = sweep.max / sweep.min;
  j["verdict"] = theorem_report(f, c);
  return j;
}

Json oracle_report(const ShapeFamily& f, const Common& c) {
  Json j = to_json(sampling_oracle(f, c.samples, c.seed));
  j["polarization"] = to_json(two_stein_check(f));
  return j;
}

// theorem over a directory: one report file per *.json input.
int theorem_directory(const fs::path& dir, const Common& c, std::ostream& out, std::ostream& err) {
  const fs::path dest = c.out.empty() ? dir : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dest, ec);
  if (ec) throw IoError("cannot create " + dest.string());

  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    if (entry.is_regular_file() && p.extension() == ".json" && p.stem().extension() != ".verdict")
      inputs.push_back(p);
  }
  std::sort(inputs.begin(), inputs.end());

  int worst = kOk;
  for (const auto& in : inputs) {
    const fs::path target = dest / (in.stem().string() + (c.format == "json" ? ".verdict.json" : ".verdict.txt"));
    try {
      const Json report = theorem_report(read_family(in), c);
      write_file_atomic(target, render(report, "theorem", c));
      out << in.filename().string() << ": " << report["status"].get<std::string>() << '\n';
    } catch (const std::exception& e) {
      const int code = exit_code_for(e);
      worst = std::max(worst, code);
      err << in.filename().string() << ": " << error_name(e) << ": " << e.what() << '\n';
    }
  }
  return worst;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw CLI::ValidationError("--params", "not a number: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Einstein and 2-stein tests for shape operators of submanifolds in space forms", "steinkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  app.add_option("--tol", c.tol, "relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--samples", c.samples, "sample count for sampling checks")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", c.out, "write the report to this path");

  std::string input;
  auto* check = app.add_subcommand("check", "Einstein and 2-stein reports");
  check->add_option("input", input, "shape family JSON")->required();

  bool traceless = false;
  auto* blockdiag = app.add_subcommand("blockdiag", "block decomposition of a pencil pair");
  blockdiag->add_option("input", input, "shape family JSON with p = 2")->required();
  blockdiag->add_flag("--traceless", traceless, "decompose the trace-free parts of an Einstein pair");

  auto* flat = app.add_subcommand("flat", "commuting-operator identities and conclusion");
  flat->add_option("input", input, "shape family JSON")->required();

  auto* theorem = app.add_subcommand("theorem", "full verdict for a family or a directory of families");
  theorem->add_option("input", input, "shape family JSON or directory")->required();

  std::string z_text = "1,0,0,0,0,0";
  double step = 1e-3;
  auto* veronese = app.add_subcommand("veronese", "shape operators of the Veronese surface in S^7");
  veronese->add_option("--z", z_text, "unit vector of C^3 as re0,im0,re1,im1,re2,im2");
  veronese->add_option("--step", step, "finite-difference step");

  std::string kind_text;
  GeneratorSpec spec;
  std::string params_text;
  auto* gen = app.add_subcommand("gen", "emit a generated shape family");
  gen->add_option("--kind", kind_text, "umbilical|commuting|clifford|scrambled_pencil|random_einstein_p2")
      ->required();
  gen->add_option("-n,--dim", spec.n, "tangent dimension");
  gen->add_option("-p,--codim", spec.p, "codimension");
  gen->add_option("--params", params_text, "comma-separated kind parameters");
  gen->add_option("--curvature", spec.c, "ambient curvature c");

  auto* oracle = app.add_subcommand("oracle", "sampling check of the trace identities");
  oracle->add_option("input", input, "shape family JSON")->required();

  std::vector<std::string> argv_rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kIoError;
  }

  try {
    if (check->parsed()) {
      emit(render(check_report(read_family(input)), "check", c), c, out);
    } else if (blockdiag->parsed()) {
      emit(render(blockdiag_report(read_family(input), traceless, c.tol), "blockdiag", c), c, out);
    } else if (flat->parsed()) {
      emit(render(flat_report(read_family(input), c), "flat", c), c, out);
    } else if (theorem->parsed()) {
      if (fs::is_directory(input)) return theorem_directory(input, c, out, err);
      emit(render(theorem_report(read_family(input), c), "theorem", c), c, out);
    } else if (veronese->parsed()) {
      std::vector<double> z;
      try {
        z = parse_list(z_text);
      } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return kIoError;
      }
      emit(render(veronese_report(z, step, c), "veronese", c), c, out);
    } else if (gen->parsed()) {
      const auto kind = parse_generator_kind(kind_text);
      if (!kind) {
        err << "usage error: unknown generator kind " << kind_text << '\n';
        return kIoError;
      }
      spec.kind = *kind;
      spec.seed = c.seed;
      try {
        spec.params = parse_list(params_text);
      } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << '\n';
        return kIoError;
      }
      if (spec.kind == GeneratorKind::ScrambledPencil || spec.kind == GeneratorKind::RandomEinsteinP2) spec.p = 2;
      // The family is the product of `gen`, so it is always written as JSON.
      emit(to_json(generate(spec)).dump(2) + "\n", c, out);
    } else if (oracle->parsed()) {
      emit(render(oracle_report(read_family(input), c), "oracle", c), c, out);
    }
  } catch (const std::exception& e) {
    err << error_name(e) << ": " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace steinkit::cli
