#include <iostream>

#include "pathqv/cli.hpp"

int main(int argc, char** argv) {
    return pathqv::cli::main_entry(argc, argv, std::cout, std::cerr);
}
