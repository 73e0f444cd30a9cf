#include <iostream>

#include "tas_cli.hpp"

int main(int argc, char** argv) { return tas::cli::run_cli(argc, argv, std::cout, std::cerr); }
