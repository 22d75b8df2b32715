#include "steinkit/json_io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace steinkit {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
  return *it;
}

int require_int(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

ShapeFamily family_from_json(const Json& j) {
  const int n = require_int(j, "n");
  const int p = require_int(j, "p");
  const Json& c = require(j, "c");
  if (!c.is_number()) throw SchemaError("field \"c\" must be a number");
  if (n < 1 || p < 1) throw SchemaError("n and p must be positive");
  const Json& ops = require(j, "operators");
  if (!ops.is_array() || static_cast<int>(ops.size()) != p)
    throw SchemaError("\"operators\" must be an array of p matrices");

  std::vector<Matrix> mats;
  for (std::size_t s = 0; s < ops.size(); ++s) {
    const Json& rows = ops[s];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw SchemaError("operator " + std::to_string(s) + " must have n rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const Json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw SchemaError("operator " + std::to_string(s) + " row " + std::to_string(i) + " must have n entries");
      for (int k = 0; k < n; ++k) {
        const Json& v = row[static_cast<std::size_t>(k)];
        if (!v.is_number()) throw SchemaError("operator entries must be numbers");
        m(i, k) = v.get<double>();
      }
    }
    mats.push_back(std::move(m));
  }
  return ShapeFamily::from_matrices(c.get<double>(), mats);
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const ShapeFamily& f) {
  Json ops = Json::array();
  for (const auto& a : f.operators()) ops.push_back(to_json(a.matrix()));
  return {{"n", f.n()}, {"p", f.p()}, {"c", f.c()}, {"operators", std::move(ops)}};
}

Json to_json(const EinsteinReport& r) { return {{"c1", r.c1}, {"einstein_residual", r.residual}}; }

Json to_json(const TwoSteinReport& r) {
  return {{"c1", r.c1},
          {"c2", r.c2},
          {"einstein_residual", r.einstein_residual},
          {"quartic_residual", r.quartic_residual},
          {"schur_gap", r.schur_gap},
          {"scale", r.scale}};
}

Json to_json(const Block& b) {
  if (const auto* d = std::get_if<DiagBlock>(&b)) return {{"type", "diag"}, {"a", d->a}, {"b", d->b}};
  const auto& pb = std::get<PairBlock>(b);
  return {{"type", "pair"}, {"alpha", pb.alpha}, {"beta", pb.beta}, {"gamma", pb.gamma}};
}

Json to_json(const BlockStructure& b) {
  Json blocks = Json::array();
  for (const auto& blk : b.blocks) blocks.push_back(to_json(blk));
  return {{"basis", to_json(b.basis.matrix())}, {"blocks", std::move(blocks)}, {"c3", b.c3}};
}

Json to_json(const FlatReport& r) {
  auto vec = [](const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  return {{"c1", r.c1},
          {"c2", r.c2},
          {"flein_residual", r.flein_residual},
          {"fl2st_residual", r.fl2st_residual},
          {"fl2stii_residual", r.fl2stii_residual},
          {"schur_gap", r.schur_gap},
          {"scale", r.scale},
          {"kappa", optional_number(r.kappa)},
          {"conclusion_residual", optional_number(r.conclusion_residual)},
          {"flein_values", vec(r.flein_values)},
          {"fl2st_values", to_json(r.fl2st_values)},
          {"fl2stii_values", vec(r.fl2stii_values)}};
}

Json to_json(const IdentitySuite& s) {
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    checks.push_back({{"name", c.name},
                      {"combination", c.combination},
                      {"measured", c.measured},
                      {"predicted", c.predicted},
                      {"gap", c.gap},
                      {"multiplier", c.multiplier},
                      {"relation_residual", c.relation_residual}});
  }
  return {{"sub_case", to_string(s.sub_case)}, {"checks", std::move(checks)}, {"eliminated_by", s.eliminated_by}};
}

Json to_json(const SectionalSweep& s) {
  return {{"planes", s.planes}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}};
}

Json to_json(const TheoremVerdict& v) {
  const Diagnostics& d = v.diagnostics;
  Json diag = {{"c1", d.c1},
               {"c2", d.c2},
               {"einstein_residual", d.einstein_residual},
               {"quartic_residual", optional_number(d.quartic_residual)},
               {"schur_gap", optional_number(d.schur_gap)},
               {"strong_pairs", d.strong_pairs},
               {"non_constant_curvature", d.non_constant_curvature},
               {"notes", d.notes}};
  if (d.flat) diag["flat"] = to_json(*d.flat);
  if (d.census) diag["census"] = to_json(*d.census);
  if (d.identities) diag["identities"] = to_json(*d.identities);
  if (d.sectional) diag["sectional"] = to_json(*d.sectional);
  return {{"branch", to_string(v.branch)},
          {"status", to_string(v.status)},
          {"kappa", optional_number(v.kappa)},
          {"diagnostics", std::move(diag)}};
}

Json to_json(const SamplingOracleReport& r) {
  return {{"samples", r.samples},
          {"c1", r.c1},
          {"c2", r.c2},
          {"max_einstein_dev", r.max_einstein_dev},
          {"max_two_stein_dev", r.max_two_stein_dev}};
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedJson(e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return parse_json(buf.str());
}

ShapeFamily read_family(const std::filesystem::path& path) { return family_from_json(read_json_file(path)); }

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into " + path.string());
  }
}

}  // namespace steinkit
