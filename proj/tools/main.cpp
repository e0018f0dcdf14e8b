#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return hexroute::cli::run(argc, argv, std::cout, std::cerr); }
