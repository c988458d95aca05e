#include "dezin/cli.hpp"

int main(int argc, char** argv) { return dezin::cli_main(argc, argv); }
