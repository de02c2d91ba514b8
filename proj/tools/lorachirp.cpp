#include <iostream>

#include "lora/cli.hpp"

int main(int argc, char** argv) { return lora::run_cli(argc, argv, std::cout, std::cerr); }
