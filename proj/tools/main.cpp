#include <iostream>

#include "cpvdw/cli.hpp"

int main(int argc, char** argv) {
  return cpvdw::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
