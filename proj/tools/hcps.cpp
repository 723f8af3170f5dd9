#include "hcps/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hcps::run_cli(argc, argv, std::cout, std::cerr); }
