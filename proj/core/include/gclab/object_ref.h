/*
 * Copyright (C) 2026 The gclab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GCLAB_OBJECT_REF_H_
#define GCLAB_OBJECT_REF_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace gclab {

// Index of an object record inside the heap that allocated it. Indices are
// handed out densely and never reused, so a stale ref is always detectable.
class ObjectRef {
 public:
  static constexpr uint32_t kNullIndex = 0xFFFFFFFFu;

  constexpr ObjectRef() = default;
  constexpr explicit ObjectRef(uint32_t index) : index_(index) {}

  static constexpr ObjectRef Null() { return ObjectRef(); }

  constexpr uint32_t index() const { return index_; }
  constexpr bool IsNull() const { return index_ == kNullIndex; }
  constexpr explicit operator bool() const { return !IsNull(); }

  constexpr auto operator<=>(const ObjectRef&) const = default;

 private:
  uint32_t index_ = kNullIndex;
};

enum class Generation : uint8_t { kYoung, kOld };

const char* GenerationName(Generation gen);

// Base of every error raised by the library.
class GcLabError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public GcLabError {
 public:
  using GcLabError::GcLabError;
};

// Target generation has no room for the requested payload.
class AllocationFailure : public GcLabError {
 public:
  using GcLabError::GcLabError;
};

// Minor collection could not fit the live young bytes into the old space.
class OldGenerationOverflow : public GcLabError {
 public:
  using GcLabError::GcLabError;
};

// Internal consistency breach (dangling slot, missing forwarding entry).
class HeapCorruption : public GcLabError {
 public:
  using GcLabError::GcLabError;
};

}  // namespace gclab

template <>
struct std::hash<gclab::ObjectRef> {
  size_t operator()(gclab::ObjectRef ref) const noexcept {
    return std::hash<uint32_t>{}(ref.index());
  }
};

#endif  // GCLAB_OBJECT_REF_H_
