#include <iostream>

#include "vacrabi/cli.hpp"

int main(int argc, char** argv) { return vacrabi::cli::run(argc, argv, std::cout, std::cerr); }
