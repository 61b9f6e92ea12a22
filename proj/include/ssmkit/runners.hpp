// Copyright 2026 The ssmkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "ssmkit/config.hpp"

namespace ssmkit::run {

/// Dispatches a parsed run configuration to the matching case study, writes
/// its CSV artifacts under the output directory, and returns the run-metadata
/// JSON (config echo, version, output list, metrics), which is also written
/// to run.json. All file artifacts are byte-identical across reruns for a
/// fixed (config, seed); wall-clock timings never land in them (the bench
/// timing CSV, measured wall time by nature, is the documented exception).
std::string run_subcommand(const config::RunConfig& config);

}  // namespace ssmkit::run
