#include "subgauss/cli.hpp"

int main(int argc, char** argv) { return subgauss::cli::run(argc, argv); }
