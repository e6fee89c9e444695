// Copyright (c) 2026 the cqe authors. MIT license; see LICENSE.

#include <vector>

#include "cqe/cli.h"

int main(int argc, char** argv) {
  return cqe::runCli(std::vector<std::string>(argv + 1, argv + argc));
}
