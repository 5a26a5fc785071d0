#include "qmc/cli.hpp"

int main(int argc, char** argv) { return qmc::cli_main(argc, argv); }
