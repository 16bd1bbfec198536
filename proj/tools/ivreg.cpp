#include <string>
#include <vector>

#include "ivreg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ivreg::run_cli(args);
}
