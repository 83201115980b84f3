#include "npisim/interface/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return npisim::interface::run_cli(argc, argv, std::cout, std::cerr);
}
