#include "bcsgap/cli.hpp"

int main(int argc, char** argv) { return bcsgap::run_cli(argc, argv); }
