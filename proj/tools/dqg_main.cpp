#include <iostream>

#include "dqg/cli.hpp"

int main(int argc, char** argv)
{
    return dqg::run_cli(argc, argv, std::cout, std::cerr);
}
