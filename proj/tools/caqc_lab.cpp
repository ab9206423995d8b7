#include "caqc/cli.hpp"

int main(int argc, char** argv) { return caqc::cli_main(argc, argv); }
