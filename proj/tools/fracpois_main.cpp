#include <iostream>
#include <string>
#include <vector>

#include "fracpois/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return fracpois::cli::run(args, std::cout, std::cerr);
}
