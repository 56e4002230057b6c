#include <iostream>

#include "quadrose/cli.hpp"

int main(int argc, char** argv) {
  return quadrose::run_cli(argc, argv, std::cout, std::cerr);
}
