#include "thermo1d/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return thermo1d::cli_main(argc, argv, std::cout, std::cerr);
}
