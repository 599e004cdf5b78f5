#include <iostream>

#include "recomb/cli.hpp"

int main(int argc, char** argv) { return recomb::run_cli(argc, argv, std::cout, std::cerr); }
