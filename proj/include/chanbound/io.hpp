#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "chanbound/bounds.hpp"
#include "chanbound/channels.hpp"
#include "chanbound/linalg.hpp"
#include "chanbound/oracle.hpp"

namespace chanbound {

using Json = nlohmann::ordered_json;

// State files: {"re": [[…]], "im": [[…]]} with optional "dim", or
// {"eigenvalues": […], "basis": {"re": …, "im": …}} with optional basis.
// Shape problems raise ParseError; invariant failures raise
// SymmetryError / InvalidStateError.
DensityMatrix state_from_json(const Json& j);
Json state_to_json(const DensityMatrix& rho);
DensityMatrix load_state(const std::filesystem::path& path);

Json matrix_to_json(const Matrix& m);
/// {"re": [[…]], "im": [[…]]}; "im" is optional.
Matrix matrix_from_json(const Json& j);

/// Finite numbers as JSON numbers, infinities as "inf" / "-inf".
Json extended_to_json(const ExtendedReal& x);
ExtendedReal extended_from_json(const Json& j);

struct SamplingSummary {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  ExtendedReal observed_min;
  ExtendedReal observed_max;

  friend bool operator==(const SamplingSummary&, const SamplingSummary&) = default;
};

struct ReportFile {
  BoundReport report;
  /// "e" or "2" for entropy-valued objectives.
  std::optional<std::string> log_base;
  std::optional<std::string> channel_file;
  std::optional<SamplingSummary> sampling;

  friend bool operator==(const ReportFile&, const ReportFile&) = default;
};

Json report_to_json(const ReportFile& r);
/// Inverse of report_to_json. Throws ParseError.
ReportFile report_from_json(const Json& j);

/// {"kind": "kraus"|"mixed_unitary", "dim": n, "ops": [{"re", "im", "weight"?}]}.
Json channel_to_json(const KrausChannel& phi);
Json channel_to_json(const MixedUnitaryChannel& phi);
Json channel_to_json(const ConstructedChannel& phi);
/// Mixed-unitary files become Kraus operators √t·U. No completeness check
/// is made; classify the result.
KrausChannel channel_from_json(const Json& j);
KrausChannel load_channel(const std::filesystem::path& path);

/// Reads and parses a JSON file. Throws ParseError.
Json load_json(const std::filesystem::path& path);

}  // namespace chanbound
