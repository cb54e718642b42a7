#include "cli.hpp"

int main(int argc, char** argv) { return kinscape::cli::run(argc, argv); }
