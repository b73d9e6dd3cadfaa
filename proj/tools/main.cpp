#include <iostream>

#include "pascomb/cli.hpp"

int main(int argc, char** argv) {
  return pascomb::run_cli(argc, argv, std::cout, std::cerr);
}
