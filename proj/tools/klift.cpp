#include "klift/cli.hpp"

int main(int argc, char** argv) { return klift::cli::run(argc, argv); }
