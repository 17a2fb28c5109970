#include "lightesd/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return lightesd::cli::run_cli(argc, argv, std::cout, std::cerr);
}
