#include <iostream>

#include "tl3d/io/cli.hpp"

int main(int argc, char** argv) { return tl3d::io::run_cli(argc, argv, std::cout, std::cerr); }
