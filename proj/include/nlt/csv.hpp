#ifndef NLT_CSV_HPP
#define NLT_CSV_HPP

#include "nlt/field.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace nlt {

// Shortest-round-trip decimal text for a double ("%.17g"); locale-free, so
// output bytes are reproducible for a fixed seed and build.
std::string fmt_double(double v);

// One row per node: coordinates, then the component samples.
void write_field_csv(const std::string& path, const Field& f);

// Fixed-schema time-series writer: header once, then one row per call.
class SeriesWriter {
public:
  SeriesWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

private:
  std::ofstream out_;
  std::size_t ncols_;
};

}  // namespace nlt

#endif
