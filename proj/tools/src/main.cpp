#include "besov/tools/commands.hpp"

int main(int argc, char** argv) { return besov::tools::run_cli(argc, argv); }
