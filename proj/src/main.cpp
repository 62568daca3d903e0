#include "corelab/commands.hpp"

int main(int argc, char** argv) { return corelab::run_cli(argc, argv); }
