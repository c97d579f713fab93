#include <iostream>

#include "pikn/cli.hpp"

int main(int argc, char** argv) { return pikn::cli::main_entry(argc, argv, std::cout, std::cerr); }
