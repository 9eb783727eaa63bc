#include <iostream>
#include <string>
#include <vector>

#include "pb4/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pb4::run(args, std::cout, std::cerr);
}
