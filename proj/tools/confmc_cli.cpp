#include <iostream>

#include "confmc/cli.hpp"

int main(int argc, char** argv) { return confmc::cli_main(argc, argv, std::cout, std::cerr); }
