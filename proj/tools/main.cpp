#include "cli.hpp"

int main(int argc, char** argv) { return crc::cli::run(argc, argv); }
