#include <iostream>

#include "blp/cli.hpp"

int main(int argc, char** argv) { return blp::run_cli(argc, argv, std::cout, std::cerr); }
