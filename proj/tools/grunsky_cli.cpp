#include "grunsky/cli.hpp"

int main(int argc, char** argv) { return grunsky::cli::main_entry(argc, argv); }
