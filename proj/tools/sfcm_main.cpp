#include <iostream>
#include <string>
#include <vector>

#include "sfcm/cli.hpp"

int main(int argc, char** argv) {
    return sfcm::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
