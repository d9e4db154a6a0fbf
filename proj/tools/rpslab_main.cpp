#include "rpslab/cli.hpp"

int main(int argc, char** argv) { return rpslab::run_cli(argc, argv); }
