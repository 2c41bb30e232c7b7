#include "phasesym/cli.hpp"

int main(int argc, char** argv) { return phasesym::cli::main_entry(argc, argv); }
