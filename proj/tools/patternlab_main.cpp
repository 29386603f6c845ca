#include <iostream>

#include "patternlab/cli.hpp"

int main(int argc, char** argv) {
    return patternlab::cli::run_cli_argv(argc, argv, std::cout, std::cerr);
}
