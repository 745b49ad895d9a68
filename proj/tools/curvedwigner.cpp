#include <iostream>

#include "cwig/cli.hpp"

int main(int argc, char** argv) { return cwig::main_entry(argc, argv, std::cout, std::cerr); }
