#include "sdfir_app/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return sdfir::app::run_cli(argc, argv, std::cout, std::cerr); }
