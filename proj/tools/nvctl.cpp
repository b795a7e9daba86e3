#include "nvoc/cli.hpp"

int main(int argc, char** argv) { return nvoc::cli::main(argc, argv); }
