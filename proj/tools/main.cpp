#include "causalkin/cli.hpp"

int main(int argc, char** argv) { return causalkin::cli_main(argc, argv); }
