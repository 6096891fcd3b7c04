#include <iostream>

#include "coverpath/cli.hpp"

int main(int argc, char** argv) { return coverpath::run_cli(argc, argv, std::cout, std::cerr); }
