#pragma once

#include <string>
#include <vector>

namespace ahvol::report {

inline constexpr int kSchemaVersion = 1;

/// %.17g, the round-trip representation used in every CSV and JSON artifact.
std::string format_real(double v);

struct CsvTable {
  std::vector<std::string> comments;  // emitted as "# ..." lines
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

/// Writes content to path, creating parent directories. Throws ahvol::Error.
void write_text(const std::string& path, const std::string& content);

}  // namespace ahvol::report
