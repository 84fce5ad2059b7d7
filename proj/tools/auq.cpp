#include <iostream>

#include "auq/cli.hpp"

int main(int argc, char** argv) { return auq::cli::run(argc, argv, std::cout, std::cerr); }
