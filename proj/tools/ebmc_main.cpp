#include "ebmc/cli.hpp"

int main(int argc, char** argv) { return ebmc::run_cli(argc, argv); }
