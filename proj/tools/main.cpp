#include "qmax_cli.hpp"

int main(int argc, char** argv) { return qmax::cli::run_cli(argc, argv); }
