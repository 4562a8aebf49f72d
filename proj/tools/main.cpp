#include "cli.h"

#include <iostream>

int main(int argc, char** argv) {
    return lorenz5::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
