#include <iostream>

#include "hyperam/cli.hpp"

int main(int argc, char** argv) {
  return hyperam::cli::run(argc, argv, std::cout, std::cerr);
}
