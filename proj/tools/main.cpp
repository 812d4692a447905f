#include "acsf_cli.hpp"

int main(int argc, char** argv) { return acsf::cli::main_entry(argc, argv); }
