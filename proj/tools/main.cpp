#include "qdb/cli.hpp"

int main(int argc, char** argv) { return qdb::cli::run(argc, argv); }
