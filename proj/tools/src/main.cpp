#include "gazsl/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return gazsl::cli::run(argc, argv, std::cout, std::cerr);
}
