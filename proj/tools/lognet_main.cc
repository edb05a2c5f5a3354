#include <iostream>
#include <string>
#include <vector>

#include "lognet/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lognet::run_cli(args, std::cout, std::cerr);
}
