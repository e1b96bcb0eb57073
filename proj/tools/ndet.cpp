#include <iostream>

#include "ndet/report.hpp"

int main(int argc, char** argv) { return ndet::cli_main(argc, argv, std::cin, std::cout, std::cerr); }
