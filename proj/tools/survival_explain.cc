#include <iostream>
#include <string>
#include <vector>

#include "survlens/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return survlens::RunCli(args, std::cout, std::cerr);
}
