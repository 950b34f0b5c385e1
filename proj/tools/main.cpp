#include <iostream>

#include "dimwitness/cli.hpp"

int main(int argc, char** argv) {
  return dimwitness::cli::run(argc, argv, std::cout, std::cerr);
}
