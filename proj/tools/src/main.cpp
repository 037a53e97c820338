#include <iostream>

#include "vms_cli/cli.hpp"

int main(int argc, char** argv) { return vms::cli::run(argc, argv, std::cout, std::cerr); }
