#include "ajel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ajel::cli::run(argc, argv, std::cout, std::cerr); }
