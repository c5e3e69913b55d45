#include "vkdelay/series.hpp"

#include <cstdio>
#include <filesystem>

namespace vkd {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {
void refuse_overwrite(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path))
    throw ConfigError("output: refusing to overwrite " + path + " (use --force)");
}
}  // namespace

SeriesWriter::SeriesWriter(const std::string& path, bool force) : path_(path) {
  refuse_overwrite(path, force);
  out_.open(path, std::ios::trunc);
  if (!out_) throw DataError("series: cannot open " + path + " for writing");
  out_ << "t,kinetic,bending,airy,coupling,full,V,q_norm\n";
}

void SeriesWriter::write(const SeriesRow& row) {
  out_ << fmt17(row.t) << ',' << fmt17(row.kinetic) << ',' << fmt17(row.bending) << ','
       << fmt17(row.airy) << ',' << fmt17(row.coupling) << ',' << fmt17(row.full) << ','
       << fmt17(row.v) << ',' << fmt17(row.q_norm) << '\n';
}

void SeriesWriter::close() {
  out_.flush();
  if (!out_) throw DataError("series: short write to " + path_);
  out_.close();
}

void write_series(const std::string& path, const std::vector<SeriesRow>& rows, bool force) {
  SeriesWriter w(path, force);
  for (const SeriesRow& r : rows) w.write(r);
  w.close();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, bool force) {
  refuse_overwrite(path, force);
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw DataError("csv: cannot open " + path + " for writing");
  for (std::size_t k = 0; k < header.size(); ++k) f << (k ? "," : "") << header[k];
  f << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) f << (k ? "," : "") << row[k];
    f << '\n';
  }
  f.flush();
  if (!f) throw DataError("csv: short write to " + path);
}

}  // namespace vkd
