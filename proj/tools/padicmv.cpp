#include <iostream>

#include "padicmv/cli.hpp"

int main(int argc, char** argv) { return padicmv::cli::main(argc, argv, std::cout, std::cerr); }
