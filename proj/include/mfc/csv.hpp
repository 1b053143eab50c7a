#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfc {

// 17 significant digits: doubles round-trip losslessly, replay runs compare
// output files byte for byte
std::string fmt_float(double v);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();

  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string read_file(const std::filesystem::path& path);

}  // namespace mfc
