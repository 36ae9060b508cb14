#include "starcap/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace starcap {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_field_dump(std::ostream& out, const ScalarField& field) {
  const RingGrid& g = field.grid;
  out << "# starcap field dump\n";
  out << "# m " << g.angular() << "\n";
  out << "# k " << g.radial() << "\n";
  out << "# q " << format_number(field.q) << "\n";
  out << "# factor " << g.ring().factor().describe() << "\n";
  out << "# ring " << g.ring().describe() << "\n";
  out << "# columns j i x1 x2 U\n";
  for (int j = 0; j < g.angular(); ++j) {
    for (int i = 0; i < g.radial(); ++i) {
      const Vec2 x = g.node(j, i);
      out << j << ' ' << i << ' ' << format_number(x.x) << ' ' << format_number(x.y) << ' '
          << format_number(field.at(j, i)) << '\n';
    }
  }
}

FieldDump read_field_dump(std::istream& in) {
  FieldDump dump;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hdr(line.substr(1));
      std::string key;
      hdr >> key;
      std::string rest;
      std::getline(hdr >> std::ws, rest);
      if (key == "m") dump.m = std::stoi(rest);
      else if (key == "k") dump.k = std::stoi(rest);
      else if (key == "q") dump.q = std::stod(rest);
      else if (key == "factor") dump.factor = rest;
      else if (key == "ring") dump.ring = rest;
      continue;
    }
    std::istringstream row(line);
    FieldDumpRow r;
    if (!(row >> r.j >> r.i >> r.x1 >> r.x2 >> r.u)) throw std::runtime_error("malformed field dump row: " + line);
    dump.rows.push_back(r);
  }
  if (dump.m <= 0 || dump.k <= 0 || dump.rows.size() != static_cast<std::size_t>(dump.m) * dump.k) {
    throw std::runtime_error("field dump header does not match its row count");
  }
  return dump;
}

}  // namespace starcap
