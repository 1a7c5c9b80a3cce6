#include "xyqcr/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "xyqcr/errors.hpp"
#include "xyqcr/version.hpp"

namespace xyqcr {

DatasetWriter::DatasetWriter(std::string command, std::vector<std::string> columns)
    : command_(std::move(command)), columns_(std::move(columns)) {}

void DatasetWriter::add_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void DatasetWriter::add_meta(const std::string& key, double value) {
  meta_.emplace_back(key, format_value(value));
}

void DatasetWriter::add_meta(const std::string& key, int value) {
  meta_.emplace_back(key, std::to_string(value));
}

void DatasetWriter::add_row(std::span<const double> values) {
  if (values.size() != columns_.size())
    throw ConfigError("DatasetWriter: row width does not match column count");
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalAbort("DatasetWriter: non-finite value in data row");
  rows_.emplace_back(values.begin(), values.end());
}

std::string DatasetWriter::format_value(double v) {
  if (v == 0.0) v = 0.0;  // collapse negative zero
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string DatasetWriter::str() const {
  std::string out;
  out += "# xy-qcr v" XYQCR_VERSION_STRING "\n";
  out += "# command: " + command_ + "\n";
  for (const auto& [k, v] : meta_) out += "# " + k + ": " + v + "\n";
  out += "# columns: ";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ",";
    out += columns_[i];
  }
  out += "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_value(row[i]);
    }
    out += "\n";
  }
  return out;
}

void DatasetWriter::write(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("DatasetWriter: cannot open output path " + tmp);
    f << str();
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw ConfigError("DatasetWriter: cannot move output into place at " + path);
}

}  // namespace xyqcr
