#include <iostream>

#include "sea/cli.hpp"

int main(int argc, char** argv) {
    return sea::cli::run_cli(argc, argv, std::cout, std::cerr);
}
