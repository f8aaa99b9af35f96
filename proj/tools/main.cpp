#include "cli.hpp"

int main(int argc, char** argv) { return workdyn::cli::run_cli(argc, argv); }
