#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return unibound::cli::run(argc, argv, std::cerr); }
