#include "cli.hpp"

int main(int argc, char** argv) { return ordforms::cli::run_cli(argc, argv); }
