// Copyright 2026 The Modality Gateway Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mgw/util/error.hpp"

namespace mgw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownModality: return "UnknownModality";
    case ErrorCode::kIrreparable: return "Irreparable";
    case ErrorCode::kBadArity: return "BadArity";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kRemoteRefusal: return "RemoteRefusal";
    case ErrorCode::kBadPayload: return "BadPayload";
    case ErrorCode::kScorerError: return "ScorerError";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kPoolExhausted: return "PoolExhausted";
    case ErrorCode::kInsufficientSource: return "InsufficientSource";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyEligibleSet: return "EmptyEligibleSet";
    case ErrorCode::kAllMissing: return "AllMissing";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kConflict: return "Conflict";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace mgw
