#pragma once

// CSV serialization of drivers, traces and diagnostic tables. Numbers are
// printed with 17 significant digits so values round-trip exactly.

#include <filesystem>
#include <string>
#include <vector>

#include "loewner/report.hpp"
#include "loewner/types.hpp"

namespace loewner::io {

std::string format_number(double v);

// Header `time,value,time_kind`.
std::string driving_csv(const DrivingFunction& driving);
DrivingFunction parse_driving_csv(const std::string& text);

// Header `re,im`.
std::string trace_csv(const Trace& trace);
Trace parse_trace_csv(const std::string& text);

// Header `value`.
std::string samples_csv(const std::vector<double>& samples);

std::string psd_table(const diagnostics::DiagnosticsReport& report);
std::string qq_table(const diagnostics::DiagnosticsReport& report);
std::string acf_table(const diagnostics::DiagnosticsReport& report);
std::string boxcount_table(const diagnostics::DiagnosticsReport& report);
std::string hill_table(const diagnostics::DiagnosticsReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace loewner::io
