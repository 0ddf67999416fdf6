#include "hazcrowd/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hazcrowd::cli_main(argc, argv, std::cout, std::cerr);
}
