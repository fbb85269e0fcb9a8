#include <iostream>
#include <string>
#include <vector>

#include "ebsvp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ebsvp::cli::run(args, std::cout, std::cerr);
}
