#include <iostream>

#include "umbilic/cli.hpp"

int main(int argc, char** argv) { return umbilic::run_cli(argc, argv, std::cout, std::cerr); }
