#pragma once

namespace idpa {

// Engine version; report schemas and output formats are frozen per minor version.
inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr const char* kReportSchema = "idpa-report/1";

}  // namespace idpa
