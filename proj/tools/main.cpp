#include "cli/commands.hpp"

int main(int argc, char** argv) { return ggmlab::cli::run(argc, argv); }
