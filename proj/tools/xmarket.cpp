#include <iostream>

#include "xmarket/cli.hpp"

int main(int argc, char** argv) { return xmarket::run_cli(argc, argv, std::cout, std::cerr); }
