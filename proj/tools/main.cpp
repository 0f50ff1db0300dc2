#include <iostream>
#include <string>
#include <vector>

#include "air/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return air::run_cli(args, std::cout, std::cerr);
}
