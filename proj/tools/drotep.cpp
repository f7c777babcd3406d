#include "drotep/cli.hpp"

int main(int argc, char** argv) { return drotep::run_cli(argc, argv); }
