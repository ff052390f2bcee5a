#include <iostream>

#include "nfcf/cli.hpp"

int main(int argc, char** argv) {
  return nfcf::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
