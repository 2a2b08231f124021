#include "njgl/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return njgl::run_cli(argc, argv, std::cout, std::cerr); }
