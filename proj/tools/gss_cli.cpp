// Copyright 2026 The gss Authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "gss/bench.hpp"

int main(int argc, char** argv) {
  return gss::run_cli(argc, argv, std::cout, std::cerr);
}
