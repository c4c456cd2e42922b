#include "ifs/cli.hpp"

int main(int argc, char** argv) { return ifs::cli::run(argc, argv); }
