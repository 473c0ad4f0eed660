#include "commands.hpp"

int main(int argc, char** argv) { return admfreq::cli::main(argc, argv); }
