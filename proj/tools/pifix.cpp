#include <iostream>

#include "pifix/cli.hpp"

int main(int argc, char** argv) { return pifix::cli::run(argc, argv, std::cout, std::cerr); }
