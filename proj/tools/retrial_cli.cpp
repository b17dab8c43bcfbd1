#include "retrial/cli.hpp"

int main(int argc, char** argv) { return retrial::cli(argc, argv); }
