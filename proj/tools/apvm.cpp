#include "apvm/cli.hpp"

int main(int argc, char** argv) { return apvm::cli_main(argc, argv); }
