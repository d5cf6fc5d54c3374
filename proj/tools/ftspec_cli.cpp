#include <iostream>

#include "ftspec/cli.hpp"

int main(int argc, char** argv) {
    return ftspec::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
