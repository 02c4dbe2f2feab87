// Copyright 2026 The ideagrpo Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IDEAGRPO_ERROR_HPP_
#define IDEAGRPO_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ideagrpo {

// Every failure the library reports carries one of these codes. The C API
// maps them one-to-one onto igr_status values.
enum class ErrorCode {
  kInvalidArgument = 1,
  // domain
  kSizeMismatch,
  kNonBinaryReward,
  kEmptyGroup,
  // policy / grpo
  kInvalidToken,
  kDegenerateGroup,
  kZeroLength,
  kLengthMismatch,
  // backend
  kTransport,
  kRateLimited,
  kPlaybookMiss,
  kAuthMissing,
  kCacheMiss,
  // judge / parsers
  kMissingSlot,
  kNoJsonBlock,
  kMissingKey,
  kTypeError,
  kParseFailure,
  // evalharness / datapipe
  kEmptyInput,
  kMalformed,
  kDuplicateId,
  kInsufficientCorpus,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ideagrpo

#endif  // IDEAGRPO_ERROR_HPP_
