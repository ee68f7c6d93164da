#include <iostream>

#include "qtrace/cli.hpp"

int main(int argc, char** argv) { return qtrace::run_cli(argc, argv, std::cout, std::cerr); }
