#include "toric/cli.hpp"

int main(int argc, char** argv) { return toric::cli_main(argc, argv); }
