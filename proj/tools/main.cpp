#include <iostream>

#include "heisenlab/cli.hpp"

int main(int argc, char** argv) { return heisenlab::cli::run(argc, argv, std::cout, std::cerr); }
