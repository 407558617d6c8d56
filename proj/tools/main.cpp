#include <iostream>
#include <string>
#include <vector>

#include "cx/io.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cx::cli(args, std::cout, std::cerr);
}
