#include "cli.hpp"

int main(int argc, char** argv) { return dkg::cli::cli_main(argc, argv); }
