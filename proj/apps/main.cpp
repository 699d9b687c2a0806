#include "lakit/cli.hpp"

int main(int argc, char** argv) { return lakit::run_cli(argc, argv); }
