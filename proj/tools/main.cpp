#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return cgcli::run(argc, argv, std::cout, std::cerr); }
