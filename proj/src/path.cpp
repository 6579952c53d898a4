#include "einsteinprobe/path.hpp"

#include <cstdio>

namespace ep {

namespace {

void write_double(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_path_csv(const Path& path, std::span<const std::string> coord_names,
                    std::ostream& os) {
  os << 't';
  for (int i = 0; i < path.dim; ++i) {
    os << ',';
    if (static_cast<std::size_t>(i) < coord_names.size())
      os << coord_names[static_cast<std::size_t>(i)];
    else
      os << 'x' << (i + 1);
  }
  os << "\r\n";
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    write_double(os, path.times[k]);
    for (int i = 0; i < path.dim; ++i) {
      os << ',';
      write_double(os, path.states[k * path.dim + static_cast<std::size_t>(i)]);
    }
    os << "\r\n";
  }
}

}  // namespace ep
