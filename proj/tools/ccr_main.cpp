#include <iostream>
#include <string>
#include <vector>

#include "ccr/cli/commands.hpp"

int main(int argc, char** argv) {
  return ccr::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
