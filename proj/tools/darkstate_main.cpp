#include "darkstate/cli.hpp"

int main(int argc, char** argv) { return darkstate::cli::run_cli(argc, argv); }
