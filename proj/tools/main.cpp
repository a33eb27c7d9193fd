#include "carex/cli.hpp"

int main(int argc, char** argv) { return carex::run_cli(argc, argv); }
