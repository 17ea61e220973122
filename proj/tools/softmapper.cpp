#include "softmapper/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return softmapper::cli::run_cli(argc, argv, std::cout, std::cerr); }
