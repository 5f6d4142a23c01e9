#include <iostream>

#include "dicke/cli/run.hpp"

int main(int argc, char** argv) {
  return dicke::cli::run(argc, argv, std::cout, std::cerr);
}
