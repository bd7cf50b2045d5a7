#pragma once

#include "dmdplace/beam.hpp"
#include "dmdplace/control_eval.hpp"
#include "dmdplace/design_loop.hpp"
#include "dmdplace/dmd.hpp"
#include "dmdplace/hankel.hpp"
#include "dmdplace/mass_correction.hpp"
#include "dmdplace/placement.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace dmdplace {

using json = nlohmann::json;

/// Shortest exact decimal form of a double (17 significant digits).
std::string format_g17(double v);

void        write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// Snapshot CSV: header `t,<x_0>,...,<x_{n-1}>` carrying the node positions,
/// then one row per time sample. Floats carry 17 significant digits so the
/// round trip is exact.
std::string  snapshot_to_csv(const SnapshotData& data);
SnapshotData snapshot_from_csv(const std::string& text);

/// CSV with a caller-provided header; one row per matrix row.
std::string matrix_to_csv(const std::vector<std::string>& columns,
                          const Matrix& rows);

std::string landscape_to_csv(const std::vector<LandscapePoint>& landscape);

json     dmd_model_to_json(const DmdModel& model);
DmdModel dmd_model_from_json(const json& j);

json placement_result_to_json(const PlacementResult& result);

json corrected_modes_to_json(const CorrectedModes& corrected,
                             const ModeSet& unloaded);

json design_result_to_json(const DesignResult& result);

json equivalence_summary_to_json(const EquivalenceSummary& summary);

json        metric_report_to_json(const MetricReport& report);
std::string metric_report_to_text(const MetricReport& report);

}  // namespace dmdplace
