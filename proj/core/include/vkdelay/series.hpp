#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "vkdelay/trajectory.hpp"

namespace vkd {

// Shortest decimal that round-trips a double (up to 17 significant digits).
std::string fmt17(double x);

// series.csv: header t,kinetic,bending,airy,coupling,full,V,q_norm and one
// 17-significant-digit row per sample.
class SeriesWriter {
 public:
  SeriesWriter(const std::string& path, bool force);
  void write(const SeriesRow& row);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

void write_series(const std::string& path, const std::vector<SeriesRow>& rows, bool force);

// Small generic CSV emitter for report files; cells are written verbatim.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, bool force);

}  // namespace vkd
