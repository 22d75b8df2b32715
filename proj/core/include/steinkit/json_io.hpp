#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "steinkit/blockdiag.hpp"
#include "steinkit/codim2.hpp"
#include "steinkit/flat.hpp"
#include "steinkit/jacobi.hpp"
#include "steinkit/linalg.hpp"
#include "steinkit/oracle.hpp"

namespace steinkit {

using Json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "steinkit/1";

/// {"n": int, "p": int, "c": float, "operators": [[[row-major]]]}; throws SchemaError.
ShapeFamily family_from_json(const Json& j);
Json to_json(const ShapeFamily& f);

Json to_json(const Matrix& m);
Json to_json(const EinsteinReport& r);
Json to_json(const TwoSteinReport& r);
Json to_json(const Block& b);
Json to_json(const BlockStructure& b);
Json to_json(const FlatReport& r);
Json to_json(const IdentitySuite& s);
Json to_json(const SectionalSweep& s);
Json to_json(const TheoremVerdict& v);
Json to_json(const SamplingOracleReport& r);

/// Throws MalformedJson with the parser's position on bad input.
Json parse_json(std::string_view text);
/// Throws IoError or MalformedJson.
Json read_json_file(const std::filesystem::path& path);
ShapeFamily read_family(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace steinkit
