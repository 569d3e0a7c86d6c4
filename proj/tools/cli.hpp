#pragma once

// Exit codes: 0 success, 1 mathematical assertion failure or refused
// computation (JSON diagnostics on stderr), 2 usage or input error.
int run_cli(int argc, char** argv);
