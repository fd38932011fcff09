#include <iostream>

#include "paretokit/cli.hpp"

int main(int argc, char** argv)
{
    return paretokit::run_cli(argc, argv, std::cout, std::cerr);
}
