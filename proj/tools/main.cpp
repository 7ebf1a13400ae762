#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  capflow::cli::CliConfig config;
  if (auto code = capflow::cli::parse_cli(argc, argv, config, std::cout, std::cerr)) return *code;
  return capflow::cli::run(config, std::cout, std::cerr);
}
