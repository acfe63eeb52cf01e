#include "hs_cli/cli.hpp"

int main(int argc, char** argv) { return hs::cli::run(argc, argv); }
