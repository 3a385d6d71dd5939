#include "cdfsvm/cli.hpp"

int main(int argc, char** argv) { return cdfsvm::run_cli(argc, argv); }
