#include "cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return vacrng::cli::run(argc, argv, std::cout, std::cerr);
}
