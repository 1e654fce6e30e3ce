//
// Copyright 2026 The dpclt Authors
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
//

#ifndef DPCLT_STATUS_MACROS_H_
#define DPCLT_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPCLT_STATUS_CONCAT_INNER_(a, b) a##b
#define DPCLT_STATUS_CONCAT_(a, b) DPCLT_STATUS_CONCAT_INNER_(a, b)

// Evaluates `expr`, returning its status from the enclosing function if it is
// not OK.
#define RETURN_IF_ERROR(expr)                     \
  do {                                            \
    const ::absl::Status _dpclt_status = (expr);  \
    if (!_dpclt_status.ok()) return _dpclt_status; \
  } while (0)

#define DPCLT_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                 \
  if (!statusor.ok()) return statusor.status();            \
  lhs = std::move(statusor).value()

// Assigns the value of a StatusOr expression to `lhs`, or returns its error.
#define ASSIGN_OR_RETURN(lhs, rexpr) \
  DPCLT_ASSIGN_OR_RETURN_IMPL_(      \
      DPCLT_STATUS_CONCAT_(_dpclt_statusor_, __LINE__), lhs, rexpr)

#endif  // DPCLT_STATUS_MACROS_H_
