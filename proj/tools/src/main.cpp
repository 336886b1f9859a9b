#include <iostream>

#include "copent_cli/cli.hpp"

int main(int argc, char** argv) { return copent::cli::run(argc, argv, std::cout, std::cerr); }
