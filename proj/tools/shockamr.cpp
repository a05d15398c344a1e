#include <iostream>

#include "shockamr/cli.hpp"

int main(int argc, char** argv) { return shockamr::cli_main(argc, argv, std::cout, std::cerr); }
