#include "levypde/solver/snapshot_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levypde::solver {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_snapshot_csv(const std::string& path, const Grid& grid, double time,
                        std::span<const double> values) {
  if (values.size() != static_cast<size_t>(grid.cells()))
    throw std::invalid_argument("write_snapshot_csv: size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_snapshot_csv: cannot open " + path);
  out << "n,d,dx,time\n";
  out << grid.n << ',' << grid.dim << ',' << format_double(grid.dx()) << ','
      << format_double(time) << '\n';
  const int cols = grid.dim == 1 ? 1 : grid.n;
  for (size_t k = 0; k < values.size(); ++k) {
    out << format_double(values[k]);
    out << ((static_cast<int>(k) % cols == cols - 1) ? '\n' : ',');
  }
  if (!out) throw std::runtime_error("write_snapshot_csv: write failed");
}

SnapshotData read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_snapshot_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "n,d,dx,time")
    throw std::runtime_error("read_snapshot_csv: bad header in " + path);
  if (!std::getline(in, line))
    throw std::runtime_error("read_snapshot_csv: missing metadata in " + path);

  SnapshotData snap;
  {
    std::istringstream meta(line);
    char c;
    if (!(meta >> snap.n >> c >> snap.d >> c >> snap.dx >> c >> snap.time))
      throw std::runtime_error("read_snapshot_csv: bad metadata in " + path);
  }
  if (snap.n <= 0 || (snap.d != 1 && snap.d != 2))
    throw std::runtime_error("read_snapshot_csv: bad shape in " + path);

  const size_t want = snap.d == 1 ? snap.n
                                  : static_cast<size_t>(snap.n) * snap.n;
  snap.values.reserve(want);
  while (std::getline(in, line)) {
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      double v = std::strtod(p, &end);
      if (end == p) break;
      snap.values.push_back(v);
      p = end;
      if (*p == ',') ++p;
    }
  }
  if (snap.values.size() != want)
    throw std::runtime_error("read_snapshot_csv: expected " +
                             std::to_string(want) + " values, got " +
                             std::to_string(snap.values.size()) + " in " + path);
  return snap;
}

}  // namespace levypde::solver
