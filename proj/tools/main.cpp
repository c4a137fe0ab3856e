#include <iostream>
#include <string>
#include <vector>

#include "polarsc/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return polarsc::run_cli(args, std::cout, std::cerr);
}
