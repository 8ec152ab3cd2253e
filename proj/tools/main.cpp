#include <iostream>

#include "sliceq/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sliceq::run_cli(args, std::cout, std::cerr);
}
