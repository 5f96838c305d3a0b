#include "luka/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return luka::run_cli(argc, argv, std::cout, std::cerr); }
