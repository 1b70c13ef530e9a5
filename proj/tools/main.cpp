#include <iostream>

#include "legmom/cli.hpp"

int main(int argc, char** argv) {
  return legmom::cli::run(argc, argv, std::cout, std::cerr);
}
