#include <iostream>

#include "mukleene/cli.hpp"

int main(int argc, char** argv) {
  return mukleene::cli::dispatch(argc, argv, std::cout, std::cerr);
}
