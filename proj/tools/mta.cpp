#include "mta/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return mta::run_cli(argc, argv, std::cout, std::cerr);
}
