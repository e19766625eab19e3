#include <iostream>

#include "nid/cli.hpp"

int main(int argc, char** argv)
{
    return nid::run_cli(argc, argv, std::cout, std::cerr);
}
