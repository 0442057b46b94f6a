/*
 * restyle - video editing style transfer
 *
 * Copyright 2026 The restyle authors.
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#pragma once

#include "restyle/cli.hpp"
#include "restyle/common.hpp"
#include "restyle/features.hpp"
#include "restyle/geometry.hpp"
#include "restyle/histogram.hpp"
#include "restyle/image.hpp"
#include "restyle/motion.hpp"
#include "restyle/pipeline.hpp"
#include "restyle/png_io.hpp"
#include "restyle/ransac.hpp"
#include "restyle/retrieval.hpp"
#include "restyle/serial.hpp"
#include "restyle/shots.hpp"
#include "restyle/style.hpp"
#include "restyle/transfer.hpp"
#include "restyle/y4m.hpp"
