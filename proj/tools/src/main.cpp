#include <iostream>

#include "sgdephase_tools/cli.hpp"

int main(int argc, char** argv) {
  return sgdephase::tools::run_cli(argc, argv, std::cout, std::cerr);
}
