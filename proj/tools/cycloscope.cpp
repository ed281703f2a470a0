#include <iostream>

#include "cycloscope/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cycloscope::dispatch(args, std::cout, std::cerr);
}
