#include <iostream>

#include "gibbsdecomp/cli.hpp"

int main(int argc, char** argv) {
  return gibbsdecomp::run_cli(argc, argv, std::cout, std::cerr);
}
