#include "lplde/cli_app.hpp"

int main(int argc, char **argv) { return lplde::run_cli(argc, argv); }
