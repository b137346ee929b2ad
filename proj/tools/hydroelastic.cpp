#include <iostream>

#include "hydroelastic/cli.hpp"

int main(int argc, char** argv) {
  return hydroelastic::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
