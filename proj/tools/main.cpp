#include <iostream>

#include "roust/cli.hpp"

int main(int argc, char** argv) { return roust::run_cli(argc, argv, std::cout, std::cerr); }
