#include <iostream>

#include "dissrel/cli/commands.hpp"

int main(int argc, char** argv) { return dissrel::cli::main_entry(argc, argv, std::cout, std::cerr); }
