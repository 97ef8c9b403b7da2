// Copyright 2026 The dpci Authors
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

#ifndef DPCI_STATUS_MACROS_H_
#define DPCI_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPCI_RETURN_IF_ERROR(expr)                 \
  do {                                             \
    const absl::Status dpci_status_ = (expr);      \
    if (!dpci_status_.ok()) return dpci_status_;   \
  } while (0)

#define DPCI_STATUS_CONCAT_INNER_(x, y) x##y
#define DPCI_STATUS_CONCAT_(x, y) DPCI_STATUS_CONCAT_INNER_(x, y)

#define DPCI_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                \
  if (!statusor.ok()) return statusor.status();           \
  lhs = std::move(statusor).value()

// Evaluates `rexpr` (an absl::StatusOr<T>), returning its status on error and
// otherwise assigning the value to `lhs`.
#define DPCI_ASSIGN_OR_RETURN(lhs, rexpr) \
  DPCI_ASSIGN_OR_RETURN_IMPL_(            \
      DPCI_STATUS_CONCAT_(dpci_statusor_, __LINE__), lhs, rexpr)

#endif  // DPCI_STATUS_MACROS_H_
