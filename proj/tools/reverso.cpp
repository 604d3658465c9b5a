// Entry point for the reverso command-line tool.

#include <iostream>
#include <string>
#include <vector>

#include "reverso/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return reverso::cli::run_cli(std::move(args), std::cout, std::cerr);
}
