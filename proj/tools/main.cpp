#include "cli.hpp"

int main(int argc, char** argv) { return hestonabc::cli::run_cli(argc, argv); }
