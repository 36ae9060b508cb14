#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starcap/grid.hpp"

namespace starcap {

/// Plain-text field dump:
///   # starcap field dump
///   # m <m>
///   # k <k>
///   # q <q>
///   # factor <description>
///   # ring <description>
///   # columns j i x1 x2 U
/// followed by m*k rows "j i x1 x2 U" in theta-major order.
void write_field_dump(std::ostream& out, const ScalarField& field);

struct FieldDumpRow {
  int j = 0;
  int i = 0;
  double x1 = 0.0;
  double x2 = 0.0;
  double u = 0.0;
};

struct FieldDump {
  int m = 0;
  int k = 0;
  double q = 0.0;
  std::string factor;
  std::string ring;
  std::vector<FieldDumpRow> rows;
};

FieldDump read_field_dump(std::istream& in);

/// Shortest round-trip decimal form, used for every number written to disk.
std::string format_number(double v);

}  // namespace starcap
