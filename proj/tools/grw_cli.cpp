#include <iostream>

#include "grw/cli.hpp"

int main(int argc, char** argv) { return grw::cli::run_cli(argc, argv, std::cout, std::cerr); }
