#include "vacrabi/format.hpp"

#include <cstdio>
#include <ostream>

namespace vacrabi {

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  out << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << r << ',' << c << ',' << sci(m(r, c).real()) << ',' << sci(m(r, c).imag()) << '\n';
    }
  }
}

}  // namespace vacrabi
