#include "commands.hpp"

int main(int argc, char** argv) { return dosgk::cli::run(argc, argv); }
