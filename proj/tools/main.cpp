#include <iostream>

#include "hestoncal/cli.hpp"

int main(int argc, char** argv) { return hestoncal::cli_dispatch(argc, argv, std::cout, std::cerr); }
