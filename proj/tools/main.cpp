#include <iostream>

#include "laprmt/cli.hpp"

int main(int argc, char** argv) {
  return laprmt::cli::run(argc, argv, std::cout, std::cerr);
}
