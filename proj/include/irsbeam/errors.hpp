// SPDX-License-Identifier: Apache-2.0
//
// irsbeam - joint active/passive beamforming for distributed-IRS mmWave downlink
// Copyright (C) 2026 irsbeam contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace irsbeam {

// Malformed or inconsistent configuration input (file or field level).
struct config_error : std::runtime_error {
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

// An iterative solver failed to meet its contract (cap exceeded, residual too large).
struct numeric_failure : std::runtime_error {
    explicit numeric_failure(const std::string &msg) : std::runtime_error(msg) {}
};

// The stacked effective channel matrix is rank-deficient; no zero-forcing solution.
struct zf_infeasible : std::runtime_error {
    explicit zf_infeasible(const std::string &msg) : std::runtime_error(msg) {}
};

// File write/read failure in the harness.
struct io_error : std::runtime_error {
    explicit io_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace irsbeam
