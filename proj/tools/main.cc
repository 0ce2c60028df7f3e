// SPDX-License-Identifier: GPL-2.0-only

#include "cli.h"

#include <iostream>

int
main(int argc, char** argv)
{
    return rachsim::cli::Run(argc, argv, std::cout, std::cerr);
}
