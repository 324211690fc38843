#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "streamtree/schema.h"

namespace streamtree {

// Parse or I/O failure while reading a stream; line is 1-based (0 if n/a).
class StreamError : public std::runtime_error {
 public:
  StreamError(const std::string& what, std::size_t line = 0);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Sidecar schema format, one directive per line, '#' starts a comment:
//
//   feature: <name> numeric
//   feature: <name> nominal <cat>,<cat>,...
//   classes: <name>,<name>,...
//   label: <column name>          (optional; default is the last column)
//
// Feature order in the schema is the instance slot order. CSV columns are
// matched to features by header name, so column order is free.
struct CsvSchema {
  Schema schema;
  std::optional<std::string> label_column;
};

CsvSchema ParseSchemaText(const std::string& text);
CsvSchema ReadSchemaFile(const std::filesystem::path& path);
std::string FormatSchemaText(const Schema& schema,
                             const std::string& label_column = "class");

// Default sidecar location for a CSV file: "<path>.schema".
std::filesystem::path SidecarPath(const std::filesystem::path& csv_path);

// Streams rows from a CSV file one at a time. If `schema` is absent the
// sidecar file is read.
std::unique_ptr<InstanceStream> OpenCsvStream(
    const std::filesystem::path& path,
    std::optional<CsvSchema> schema = std::nullopt);

// Drains `stream` to `path` (header + rows, numerics at 17 significant digits)
// and writes the sidecar schema next to it. Returns the row count.
std::size_t WriteCsv(InstanceStream& stream, const std::filesystem::path& path,
                     std::size_t max_rows = static_cast<std::size_t>(-1));

}  // namespace streamtree
