#include "rbopt/cli.hpp"

int main(int argc, char** argv) { return rbopt::run_cli(argc, argv); }
