// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "noma_cli/app.hpp"

int main(int argc, char** argv) { return noma::cli::run_cli(argc, argv, std::cout, std::cerr); }
