#include <iostream>

#include "hasard/cli/cli.hpp"

int main(int argc, char** argv) { return hasard::cli::run(argc, argv, std::cout, std::cerr); }
