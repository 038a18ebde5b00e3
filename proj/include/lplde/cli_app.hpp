#ifndef LPLDE_CLI_APP_HPP
#define LPLDE_CLI_APP_HPP

namespace lplde {

// Entry point of the command-line tool.  Returns the process exit code:
// 0 success, 1 infeasible/failed computation, 2 usage error.
int run_cli(int argc, char **argv);

} // namespace lplde

#endif
