#include "cosq/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return cosq::cli::run(argc, argv, std::cout, std::cerr); }
