// Copyright (c) 2026 The fse-toolkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fse/benchmark.hpp"
#include "fse/blocks.hpp"
#include "fse/error.hpp"
#include "fse/fft.hpp"
#include "fse/image.hpp"
#include "fse/image_io.hpp"
#include "fse/loss_pattern.hpp"
#include "fse/metrics.hpp"
#include "fse/model.hpp"
#include "fse/params.hpp"
#include "fse/reconstruct.hpp"
#include "fse/verify.hpp"
#include "fse/weighting.hpp"
