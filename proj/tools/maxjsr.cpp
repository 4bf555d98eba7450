#include <iostream>

#include "maxjsr/commands.hpp"

int main(int argc, char** argv) { return maxjsr::run_cli(argc, argv, std::cout, std::cerr); }
