#include "kharper/run.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return kharper::cli::main_entry(argc, argv, std::cout, std::cerr);
}
