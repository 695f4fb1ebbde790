#include "ahvol/cli.hpp"

int main(int argc, char** argv) { return ahvol::cli::run(argc, argv); }
