#include "lrmt/cli/commands.hpp"

int main(int argc, char** argv) { return lrmt::cli::run(argc, argv); }
