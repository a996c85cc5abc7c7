// Copyright 2026 The Authors.
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

#ifndef NODAL_DIGEST_HPP_
#define NODAL_DIGEST_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nodal {

using Bytes = std::vector<std::uint8_t>;

// SHA-256 of a payload.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const;

  friend bool operator==(const Digest&, const Digest&) = default;
  friend auto operator<=>(const Digest&, const Digest&) = default;
};

Digest payload_digest(std::span<const std::uint8_t> payload);
Digest payload_digest(std::string_view text);

Bytes to_bytes(std::string_view text);

}  // namespace nodal

#endif  // NODAL_DIGEST_HPP_
