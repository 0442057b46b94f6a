/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#include "restyle/cli.hpp"

int main(int argc, char** argv) { return restyle::cli::run(argc, argv); }
