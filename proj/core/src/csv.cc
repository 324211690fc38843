#include "streamtree/csv.h"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace streamtree {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string Unquote(std::string s) {
  s = Trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> SplitFields(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(Unquote(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, end);
}

class CsvStream : public InstanceStream {
 public:
  CsvStream(const std::filesystem::path& path, CsvSchema schema)
      : path_(path), schema_(std::move(schema.schema)), in_(path) {
    if (!in_) throw StreamError("cannot open '" + path.string() + "'");
    std::string header;
    if (!std::getline(in_, header)) {
      throw StreamError(path.string() + ": missing header row", 1);
    }
    line_ = 1;
    if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0) header.erase(0, 3);
    const auto columns = SplitFields(header);
    const std::string label_name =
        schema.label_column ? *schema.label_column : (columns.empty() ? "" : columns.back());
    std::map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < schema_.num_features(); ++i) {
      by_name[schema_.feature(i).name] = i;
    }
    slot_of_column_.assign(columns.size(), kIgnored);
    std::vector<bool> seen(schema_.num_features(), false);
    bool has_label = false;
    for (std::size_t col = 0; col < columns.size(); ++col) {
      if (columns[col] == label_name && !has_label) {
        slot_of_column_[col] = kLabel;
        has_label = true;
        continue;
      }
      auto it = by_name.find(columns[col]);
      if (it == by_name.end()) {
        throw StreamError(path.string() + ": column '" + columns[col] +
                              "' is not in the schema", 1);
      }
      if (seen[it->second]) {
        throw StreamError(path.string() + ": duplicate column '" + columns[col] + "'", 1);
      }
      seen[it->second] = true;
      slot_of_column_[col] = it->second;
    }
    if (!has_label) {
      throw StreamError(path.string() + ": label column '" + label_name + "' not found", 1);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        throw StreamError(path.string() + ": feature '" + schema_.feature(i).name +
                              "' has no column", 1);
      }
    }
    category_index_.resize(schema_.num_features());
    for (std::size_t i = 0; i < schema_.num_features(); ++i) {
      const Feature& f = schema_.feature(i);
      for (std::size_t c = 0; c < f.categories.size(); ++c) {
        category_index_[i][f.categories[c]] = c;
      }
    }
  }

  const Schema& schema() const override { return schema_; }

  bool Next(Instance& out) override {
    std::string line;
    while (true) {
      if (!std::getline(in_, line)) return false;
      ++line_;
      if (!Trim(line).empty()) break;
    }
    const auto fields = SplitFields(line);
    if (fields.size() != slot_of_column_.size()) {
      Fail("expected " + std::to_string(slot_of_column_.size()) + " fields, found " +
           std::to_string(fields.size()));
    }
    out.values.assign(schema_.num_features(), 0.0);
    for (std::size_t col = 0; col < fields.size(); ++col) {
      const std::string& field = fields[col];
      const std::size_t slot = slot_of_column_[col];
      if (slot == kIgnored) continue;
      if (field.empty() || field == "?") Fail("missing value in column " + std::to_string(col + 1));
      if (slot == kLabel) {
        const std::size_t label = schema_.class_index(field);
        if (label == Schema::npos) Fail("unknown class '" + field + "'");
        out.label = label;
        continue;
      }
      const Feature& f = schema_.feature(slot);
      if (f.nominal()) {
        auto it = category_index_[slot].find(field);
        if (it == category_index_[slot].end()) {
          Fail("unknown category '" + field + "' for feature '" + f.name + "'");
        }
        out.values[slot] = static_cast<double>(it->second);
      } else {
        double v = 0.0;
        auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || end != field.data() + field.size() || !std::isfinite(v)) {
          Fail("feature '" + f.name + "' expects a finite number, got '" + field + "'");
        }
        out.values[slot] = v;
      }
    }
    return true;
  }

 private:
  static constexpr std::size_t kIgnored = static_cast<std::size_t>(-1);
  static constexpr std::size_t kLabel = static_cast<std::size_t>(-2);

  [[noreturn]] void Fail(const std::string& message) const {
    throw StreamError(path_.string() + ":" + std::to_string(line_) + ": " + message, line_);
  }

  std::filesystem::path path_;
  Schema schema_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::vector<std::size_t> slot_of_column_;
  std::vector<std::map<std::string, std::size_t>> category_index_;
};

}  // namespace

StreamError::StreamError(const std::string& what, std::size_t line)
    : std::runtime_error(what), line_(line) {}

CsvSchema ParseSchemaText(const std::string& text) {
  std::vector<Feature> features;
  std::vector<std::string> classes;
  std::optional<std::string> label;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& msg) {
    throw ConfigError("schema line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = Trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail("expected 'key: value'");
    const std::string key = Trim(line.substr(0, colon));
    const std::string value = Trim(line.substr(colon + 1));
    if (key == "feature") {
      std::istringstream parts(value);
      std::string name, kind, cats;
      parts >> name >> kind;
      std::getline(parts, cats);
      cats = Trim(cats);
      if (name.empty() || kind.empty()) fail("feature needs a name and a kind");
      if (kind == "numeric") {
        if (!cats.empty()) fail("numeric feature takes no categories");
        features.push_back(Feature::Numeric(name));
      } else if (kind == "nominal") {
        if (cats.empty()) fail("nominal feature '" + name + "' needs categories");
        features.push_back(Feature::Nominal(name, SplitFields(cats)));
      } else {
        fail("unknown feature kind '" + kind + "'");
      }
    } else if (key == "classes") {
      classes = SplitFields(value);
    } else if (key == "label") {
      label = value;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  return CsvSchema{Schema(std::move(features), std::move(classes)), label};
}

CsvSchema ReadSchemaFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StreamError("cannot open schema file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseSchemaText(buf.str());
}

std::string FormatSchemaText(const Schema& schema, const std::string& label_column) {
  std::string out;
  for (const Feature& f : schema.features()) {
    out += "feature: " + f.name;
    if (f.nominal()) {
      out += " nominal ";
      for (std::size_t i = 0; i < f.categories.size(); ++i) {
        if (i) out += ",";
        out += f.categories[i];
      }
    } else {
      out += " numeric";
    }
    out += "\n";
  }
  out += "classes: ";
  for (std::size_t i = 0; i < schema.num_classes(); ++i) {
    if (i) out += ",";
    out += schema.classes()[i];
  }
  out += "\nlabel: " + label_column + "\n";
  return out;
}

std::filesystem::path SidecarPath(const std::filesystem::path& csv_path) {
  return std::filesystem::path(csv_path.string() + ".schema");
}

std::unique_ptr<InstanceStream> OpenCsvStream(const std::filesystem::path& path,
                                              std::optional<CsvSchema> schema) {
  if (!std::filesystem::exists(path)) {
    throw StreamError("no such file '" + path.string() + "'");
  }
  if (!schema) {
    const auto sidecar = SidecarPath(path);
    if (!std::filesystem::exists(sidecar)) {
      throw StreamError("no schema given and no sidecar '" + sidecar.string() + "'");
    }
    schema = ReadSchemaFile(sidecar);
  }
  return std::make_unique<CsvStream>(path, std::move(*schema));
}

std::size_t WriteCsv(InstanceStream& stream, const std::filesystem::path& path,
                     std::size_t max_rows) {
  const Schema& schema = stream.schema();
  std::string label_column = "class";
  while (true) {
    bool clash = false;
    for (const Feature& f : schema.features()) clash |= f.name == label_column;
    if (!clash) break;
    label_column += "_";
  }
  {
    std::ofstream sidecar(SidecarPath(path));
    if (!sidecar) throw StreamError("cannot write '" + SidecarPath(path).string() + "'");
    sidecar << FormatSchemaText(schema, label_column);
  }
  std::ofstream out(path);
  if (!out) throw StreamError("cannot write '" + path.string() + "'");
  for (const Feature& f : schema.features()) out << f.name << ',';
  out << label_column << '\n';
  Instance inst;
  std::size_t rows = 0;
  while (rows < max_rows && stream.Next(inst)) {
    for (std::size_t i = 0; i < schema.num_features(); ++i) {
      const Feature& f = schema.feature(i);
      if (f.nominal()) {
        out << f.categories[static_cast<std::size_t>(inst.values[i])];
      } else {
        out << FormatNumber(inst.values[i]);
      }
      out << ',';
    }
    out << schema.classes()[inst.label] << '\n';
    ++rows;
  }
  return rows;
}

}  // namespace streamtree
