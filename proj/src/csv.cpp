#include "nlt/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace nlt {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(const std::string& path, const Field& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const Grid& g = f.grid();
  out << "x";
  if (g.dims() == 2) out << ",y";
  for (int c = 0; c < f.comps(); ++c) out << ",c" << c;
  out << "\n";
  for (std::size_t i = 0; i < g.nodes(); ++i) {
    out << fmt_double(g.coord(0, i));
    if (g.dims() == 2) out << "," << fmt_double(g.coord(1, i));
    for (int c = 0; c < f.comps(); ++c) out << "," << fmt_double(f.at(c, i));
    out << "\n";
  }
}

SeriesWriter::SeriesWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), ncols_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void SeriesWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_) throw std::invalid_argument("SeriesWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt_double(values[i]);
  out_ << "\n";
}

}  // namespace nlt
