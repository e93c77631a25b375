#include <iostream>

#include "btiso_cli.hpp"

int main(int argc, char** argv) { return btiso::cli::run(argc, argv, std::cout, std::cerr); }
