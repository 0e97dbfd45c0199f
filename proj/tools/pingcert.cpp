#include <iostream>

#include "pingcert/cli.hpp"

int main(int argc, char** argv) { return pingcert::cli_main(argc, argv, std::cout, std::cerr); }
