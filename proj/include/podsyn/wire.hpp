// Copyright 2026 The Podsyn Authors
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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "podsyn/digest.hpp"
#include "podsyn/error.hpp"
#include "podsyn/shamir.hpp"

namespace podsyn {

// Closed registry of frame types.
enum class MsgType : std::uint8_t {
  control = 0,
  share_vector = 1,
  aggregate_share = 2,
  selection_contribution = 3,
  selection_open = 4,
  attestation = 5,
  reveal = 6,
  result = 7,
};

inline constexpr std::uint8_t kMaxMsgType = 7;

// Wire layout: length(4, big-endian) | msg_type(1) | sender(2, big-endian)
// | payload. length covers msg_type + sender + payload.
struct Frame {
  MsgType type = MsgType::control;
  std::uint16_t sender = 0;
  std::vector<std::uint8_t> payload;

  bool operator==(const Frame&) const = default;
};

inline constexpr std::size_t kFrameOverhead = 7;

inline std::size_t wire_size(const Frame& f) {
  return kFrameOverhead + f.payload.size();
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> s));
  }
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> s));
  }
}

// Cursor-style reads; every getter bounds-checks and advances the offset.
inline std::uint8_t get_u8(std::span<const std::uint8_t> in,
                           std::size_t& off) {
  require(off + 1 <= in.size(), Errc::malformed_frame, "buffer underrun");
  return in[off++];
}

inline std::uint16_t get_u16(std::span<const std::uint8_t> in,
                             std::size_t& off) {
  require(off + 2 <= in.size(), Errc::malformed_frame, "buffer underrun");
  std::uint16_t v = static_cast<std::uint16_t>(
      (static_cast<std::uint16_t>(in[off]) << 8) | in[off + 1]);
  off += 2;
  return v;
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> in,
                             std::size_t& off) {
  require(off + 4 <= in.size(), Errc::malformed_frame, "buffer underrun");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | in[off + i];
  off += 4;
  return v;
}

inline std::uint64_t get_u64(std::span<const std::uint8_t> in,
                             std::size_t& off) {
  require(off + 8 <= in.size(), Errc::malformed_frame, "buffer underrun");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[off + i];
  off += 8;
  return v;
}

inline std::vector<std::uint8_t> encode_frame(const Frame& f) {
  std::vector<std::uint8_t> out;
  out.reserve(wire_size(f));
  put_u32(out, static_cast<std::uint32_t>(f.payload.size() + 3));
  out.push_back(static_cast<std::uint8_t>(f.type));
  put_u16(out, f.sender);
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  return out;
}

// Decodes one frame from the front of `in`; `consumed` reports how many
// bytes it occupied.
inline Frame decode_frame(std::span<const std::uint8_t> in,
                          std::size_t* consumed = nullptr) {
  std::size_t off = 0;
  std::uint32_t length = get_u32(in, off);
  require(length >= 3, Errc::malformed_frame, "length below minimum");
  require(in.size() - off >= length, Errc::malformed_frame, "truncated frame");
  std::uint8_t type = get_u8(in, off);
  require(type <= kMaxMsgType, Errc::malformed_frame,
          "unknown msg_type " + std::to_string(type));
  Frame f;
  f.type = static_cast<MsgType>(type);
  f.sender = get_u16(in, off);
  f.payload.assign(in.begin() + static_cast<std::ptrdiff_t>(off),
                   in.begin() + static_cast<std::ptrdiff_t>(4 + length));
  if (consumed) *consumed = 4 + length;
  return f;
}

// A share occupies 16 bytes: x then y, each 8-byte big-endian. The sharing
// threshold travels once per message, not per share.
inline void put_share(std::vector<std::uint8_t>& out, const Share& s) {
  put_u64(out, s.x);
  put_u64(out, s.y.value);
}

inline Share get_share(std::span<const std::uint8_t> in, std::size_t& off,
                       std::uint32_t threshold) {
  Share s;
  s.x = get_u64(in, off);
  s.y = FieldElement{get_u64(in, off)};
  s.threshold = threshold;
  return s;
}

// ---- Protocol message payloads ----

struct ShareVectorMsg {
  std::uint16_t provider = 0;
  std::uint16_t marginal = 0;
  std::uint8_t threshold = 0;
  std::vector<Share> shares;
};

inline std::vector<std::uint8_t> encode_share_vector(const ShareVectorMsg& m) {
  std::vector<std::uint8_t> out;
  out.reserve(5 + 16 * m.shares.size());
  put_u16(out, m.provider);
  put_u16(out, m.marginal);
  out.push_back(m.threshold);
  for (const Share& s : m.shares) put_share(out, s);
  return out;
}

inline ShareVectorMsg decode_share_vector(std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  ShareVectorMsg m;
  m.provider = get_u16(in, off);
  m.marginal = get_u16(in, off);
  m.threshold = get_u8(in, off);
  require((in.size() - off) % 16 == 0, Errc::malformed_frame,
          "share vector payload not a multiple of 16");
  while (off < in.size()) m.shares.push_back(get_share(in, off, m.threshold));
  return m;
}

struct AggregateShareMsg {
  std::uint16_t marginal = 0;
  std::uint8_t threshold = 0;
  std::vector<Share> shares;
};

inline std::vector<std::uint8_t> encode_aggregate_share(
    const AggregateShareMsg& m) {
  std::vector<std::uint8_t> out;
  out.reserve(3 + 16 * m.shares.size());
  put_u16(out, m.marginal);
  out.push_back(m.threshold);
  for (const Share& s : m.shares) put_share(out, s);
  return out;
}

inline AggregateShareMsg decode_aggregate_share(
    std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  AggregateShareMsg m;
  m.marginal = get_u16(in, off);
  m.threshold = get_u8(in, off);
  require((in.size() - off) % 16 == 0, Errc::malformed_frame,
          "aggregate share payload not a multiple of 16");
  while (off < in.size()) m.shares.push_back(get_share(in, off, m.threshold));
  return m;
}

// Used for both selection contributions and selection opens.
struct SelectionMsg {
  std::uint8_t threshold = 0;
  Share share;
};

inline std::vector<std::uint8_t> encode_selection(const SelectionMsg& m) {
  std::vector<std::uint8_t> out;
  out.reserve(17);
  out.push_back(m.threshold);
  put_share(out, m.share);
  return out;
}

inline SelectionMsg decode_selection(std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  SelectionMsg m;
  m.threshold = get_u8(in, off);
  m.share = get_share(in, off, m.threshold);
  require(off == in.size(), Errc::malformed_frame, "trailing selection bytes");
  return m;
}

enum class AttestationKind : std::uint8_t { request = 0, report = 1 };

struct AttestationMsg {
  AttestationKind kind = AttestationKind::request;
  std::uint64_t nonce = 0;
  Digest256 measurement{};  // report only
  Digest256 session_key{};  // report only
};

inline std::vector<std::uint8_t> encode_attestation(const AttestationMsg& m) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(m.kind));
  put_u64(out, m.nonce);
  if (m.kind == AttestationKind::report) {
    out.insert(out.end(), m.measurement.begin(), m.measurement.end());
    out.insert(out.end(), m.session_key.begin(), m.session_key.end());
  }
  return out;
}

inline AttestationMsg decode_attestation(std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  AttestationMsg m;
  std::uint8_t kind = get_u8(in, off);
  require(kind <= 1, Errc::malformed_frame, "bad attestation kind");
  m.kind = static_cast<AttestationKind>(kind);
  m.nonce = get_u64(in, off);
  if (m.kind == AttestationKind::report) {
    require(in.size() - off == 64, Errc::malformed_frame,
            "attestation report truncated");
    std::copy(in.begin() + static_cast<std::ptrdiff_t>(off),
              in.begin() + static_cast<std::ptrdiff_t>(off + 32),
              m.measurement.begin());
    off += 32;
    std::copy(in.begin() + static_cast<std::ptrdiff_t>(off),
              in.begin() + static_cast<std::ptrdiff_t>(off + 32),
              m.session_key.begin());
    off += 32;
  }
  require(off == in.size(), Errc::malformed_frame, "trailing attestation bytes");
  return m;
}

struct RevealCmdMsg {
  std::uint16_t chosen = 0;  // endpoint id of the enclave agent
};

inline std::vector<std::uint8_t> encode_reveal_cmd(const RevealCmdMsg& m) {
  std::vector<std::uint8_t> out;
  put_u16(out, m.chosen);
  return out;
}

inline RevealCmdMsg decode_reveal_cmd(std::span<const std::uint8_t> in) {
  std::size_t off = 0;
  RevealCmdMsg m;
  m.chosen = get_u16(in, off);
  require(off == in.size(), Errc::malformed_frame, "trailing reveal bytes");
  return m;
}

}  // namespace podsyn
