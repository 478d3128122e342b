#include "ovr/cli.hpp"

int main(int argc, char** argv) { return ovr::run_cli(argc, argv); }
