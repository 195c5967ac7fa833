// format.hpp - fixed numeric formatting for CSV output.

#pragma once

#include <complex>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace vacrabi {

// printf "%.12e"; identical runs give byte-identical files.
std::string sci(double x);

// row,col,re,im for every entry of a matrix.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);

}  // namespace vacrabi
