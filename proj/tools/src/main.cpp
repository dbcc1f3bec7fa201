#include <iostream>

#include "nondiv_cli/cli.hpp"

int main(int argc, char** argv) { return nondiv::cli::run(argc, argv, std::cout, std::cerr); }
