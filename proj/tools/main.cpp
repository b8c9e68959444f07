#include "cli.hpp"

int main(int argc, char** argv) { return ldot::cli::main_entry(argc, argv); }
