#include <iostream>

#include "hallmhd/cli.hpp"

int main(int argc, char** argv) { return hallmhd::cli_main(argc, argv, std::cout, std::cerr); }
