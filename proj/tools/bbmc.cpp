#include <iostream>

#include "bbm/cli.hpp"

int main(int argc, char** argv)
{
    return bbm::cli::run_cli(argc, argv, std::cout, std::cerr);
}
