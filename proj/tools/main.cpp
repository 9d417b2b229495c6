#include "airyspec/cli.hpp"

int main(int argc, char** argv) { return airyspec::main_cli(argc, argv); }
