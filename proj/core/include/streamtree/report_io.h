#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "streamtree/prequential.h"

namespace streamtree {

// One JSON document per run. Keys are emitted in a fixed order; the only
// timing field is "elapsed_seconds".
std::string ReportToJson(const PrequentialReport& report);
PrequentialReport ReportFromJson(const std::string& text);

std::string ReportCsvHeader();
std::string ReportCsvRow(const PrequentialReport& report);

void WriteReportFile(const PrequentialReport& report,
                     const std::filesystem::path& path);
PrequentialReport ReadReportFile(const std::filesystem::path& path);

// Every "*.json" report under `dir` (sorted by file name).
std::vector<PrequentialReport> ReadReportDirectory(
    const std::filesystem::path& dir);

}  // namespace streamtree
