#include <iostream>

#include "xcoref/cli.h"

int main(int argc, char **argv) { return xcoref::run_cli(argc, argv, std::cout, std::cerr); }
