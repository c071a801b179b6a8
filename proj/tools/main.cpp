#include "crtsis/cli.hpp"

int main(int argc, char** argv) { return crtsis::run_cli(argc, argv); }
