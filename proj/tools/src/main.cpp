#include <iostream>

#include "steinkit_cli/cli.hpp"

int main(int argc, char** argv) {
  return steinkit::cli::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
