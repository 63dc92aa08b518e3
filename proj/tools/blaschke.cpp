#include <iostream>

#include "blaschke/cli.hpp"

int main(int argc, char** argv) { return blaschke::cli_main(argc, argv, std::cout, std::cerr); }
