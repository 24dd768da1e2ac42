#include <iostream>

#include "featnet/cli.hpp"

int main(int argc, char** argv) { return featnet::cli_dispatch(argc, argv, std::cout, std::cerr); }
