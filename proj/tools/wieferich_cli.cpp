#include <iostream>

#include "wieferich/cli.hpp"

int main(int argc, char** argv) { return wieferich::cli::run(argc, argv, std::cout, std::cerr); }
