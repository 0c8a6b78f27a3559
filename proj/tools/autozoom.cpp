#include <iostream>

#include "autozoom/cli/app.hpp"

int main(int argc, char** argv) { return autozoom::cli::run(argc, argv, std::cout, std::cerr); }
