#include <string>
#include <vector>

#include "gadgetforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gforge::run_cli(args);
}
