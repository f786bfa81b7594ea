#include <iostream>

#include "maintviz/cli.hpp"

int main(int argc, char** argv) {
  return maintviz::cli::run(argc, argv, std::cout, std::cerr);
}
