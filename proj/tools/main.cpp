#include "cli.hpp"

int main(int argc, char** argv) { return relaylab::cli::main_entry(argc, argv); }
