#include <iostream>

#include "dpdp/cli.hpp"

int main(int argc, char** argv) {
  return dpdp::cli::main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
