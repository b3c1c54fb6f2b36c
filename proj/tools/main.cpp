#include "cli.hpp"

int main(int argc, char** argv) { return pilgrim::cli::run(argc, argv); }
