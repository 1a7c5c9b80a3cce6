#pragma once

#include <span>
#include <string>
#include <vector>

namespace xyqcr {

/// CSV dataset with a '#'-prefixed metadata header. Every file starts with
/// `# xy-qcr v<semver>`, echoes the resolved run configuration, then lists
/// the column names. Rows are written with 15 significant digits in the C
/// locale, so identical configs produce byte-identical files.
class DatasetWriter {
 public:
  DatasetWriter(std::string command, std::vector<std::string> columns);

  void add_meta(const std::string& key, const std::string& value);
  void add_meta(const std::string& key, double value);
  void add_meta(const std::string& key, int value);

  /// Append one data row; throws NumericalAbort on NaN/Inf.
  void add_row(std::span<const double> values);

  /// Serialize header + rows.
  std::string str() const;

  /// Write atomically-ish (temp file + rename) to `path`.
  void write(const std::string& path) const;

  static std::string format_value(double v);

 private:
  std::string command_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace xyqcr
