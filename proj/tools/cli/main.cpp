#include <iostream>

#include "cli/args.hpp"
#include "cli/commands.hpp"

int main(int argc, char** argv) {
  const auto parsed = mcdelay::cli::parse_command_line(argc, argv);
  if (!parsed.spec) {
    (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.message;
    return parsed.exit_code == 0 ? 0 : mcdelay::cli::kExitConfig;
  }
  return mcdelay::cli::run(*parsed.spec, std::cout, std::cerr);
}
