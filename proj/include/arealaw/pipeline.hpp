#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "arealaw/config.hpp"
#include "arealaw/heatfit.hpp"
#include "arealaw/record.hpp"

namespace arealaw {

struct RunOptions {
  bool allow_large = false;
};

struct RunResult {
  Json record;   // deterministic: config snapshot, spectrum, curves, scans, fits, certificates
  Json timings;  // wall-clock seconds per stage, kept out of the record
  /// 0, or 3 when some certificate had no admissible T_c (recorded under "errors").
  int exit_code = 0;
};

/// build -> diagonalize -> thermal curve -> entropy scan -> certificates and fits.
RunResult run_pipeline(const RunConfig& config, const RunOptions& options = {});

/// Files named in `formats` (csv, json, svg, txt) rendered from a run record.
std::vector<std::filesystem::path> write_outputs(const Json& record, const std::filesystem::path& dir,
                                                 const std::vector<std::string>& formats);

std::string summary_text(const Json& record);

/// Certificate record for measured heat-capacity data, with the inputs that produced it.
Json data_certificate_record(std::span<const HeatSample> samples, const DataCertInputs& in,
                             const std::string& source);
std::string data_certificate_summary(const Json& record);

void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);

}  // namespace arealaw
