#include <iostream>

#include "regret_floor/cli.hpp"

int main(int argc, char** argv) {
  return regret_floor::cli::run(argc, argv, std::cout, std::cerr);
}
