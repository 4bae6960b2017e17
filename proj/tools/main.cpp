#include <iostream>

#include "geoflow/cli.hpp"

int main(int argc, char** argv) { return geoflow::run_command(argc, argv, std::cout, std::cerr); }
