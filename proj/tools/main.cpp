#include <string>
#include <vector>

#include "oscwell/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return oscwell::run_cli(args);
}
