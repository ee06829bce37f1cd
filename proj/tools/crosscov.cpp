#include "crosscov/cli.hpp"

int main(int argc, char** argv) { return crosscov::cli::run(argc, argv); }
