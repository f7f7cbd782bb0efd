#include "cli.hpp"

int main(int argc, char** argv) { return segdiag::cli::run(argc, argv); }
