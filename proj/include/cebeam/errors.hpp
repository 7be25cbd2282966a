// SPDX-License-Identifier: Apache-2.0
//
// cebeam - constant-envelope transmit beamforming for MIMO radar with few-bit ADCs
// Copyright (C) 2026 The cebeam authors
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

namespace cebeam {

// Bit depth outside the tabulated AQNM range.
class UnsupportedResolution : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Covariance too close to singular for log-determinants.
class IllConditionedModel : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Direction of the zero vector requested (t = 0 in the one-bit relaxation).
class UndefinedDirection : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class LineSearchStall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InfeasibleWaveform : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class CalibrationTooSmall : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cebeam
