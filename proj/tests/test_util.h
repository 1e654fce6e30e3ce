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

#ifndef DPCLT_TESTS_TEST_UTIL_H_
#define DPCLT_TESTS_TEST_UTIL_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gtest/gtest.h"

#define DPCLT_TEST_CONCAT_INNER_(a, b) a##b
#define DPCLT_TEST_CONCAT_(a, b) DPCLT_TEST_CONCAT_INNER_(a, b)

#define ASSERT_OK(expr)                                  \
  do {                                                   \
    const ::absl::Status _st = ::dpclt::testing::ToStatus(expr); \
    ASSERT_TRUE(_st.ok()) << _st;                        \
  } while (0)

#define EXPECT_OK(expr) EXPECT_TRUE(::dpclt::testing::ToStatus(expr).ok())

#define DPCLT_ASSERT_OK_AND_ASSIGN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                     \
  ASSERT_TRUE(tmp.ok()) << tmp.status();                  \
  lhs = std::move(tmp).value()

#define ASSERT_OK_AND_ASSIGN(lhs, rexpr) \
  DPCLT_ASSERT_OK_AND_ASSIGN_IMPL_(      \
      DPCLT_TEST_CONCAT_(_dpclt_test_or_, __LINE__), lhs, rexpr)

namespace dpclt::testing {

inline absl::Status ToStatus(const absl::Status& s) { return s; }
template <typename T>
absl::Status ToStatus(const absl::StatusOr<T>& s) {
  return s.status();
}

}  // namespace dpclt::testing

#endif  // DPCLT_TESTS_TEST_UTIL_H_
