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

#include <gtest/gtest.h>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "podsyn/digest.hpp"
#include "podsyn/wire.hpp"

namespace podsyn {
namespace {

using Bytes = std::vector<std::uint8_t>;

void expect_error(Errc code, const std::function<void()>& fn) {
  try {
    fn();
    FAIL() << "expected error code " << static_cast<int>(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code);
  }
}

TEST(Endian, FrozenBigEndianLayout) {
  Bytes out;
  put_u16(out, 0x1234);
  EXPECT_EQ(out, (Bytes{0x12, 0x34}));
  out.clear();
  put_u32(out, 0xDEADBEEFu);
  EXPECT_EQ(out, (Bytes{0xDE, 0xAD, 0xBE, 0xEF}));
  out.clear();
  put_u64(out, 0x0102030405060708ull);
  EXPECT_EQ(out, (Bytes{1, 2, 3, 4, 5, 6, 7, 8}));
}

TEST(Endian, RoundTripAndUnderrun) {
  Bytes out;
  put_u16(out, 65535);
  put_u32(out, 0);
  put_u64(out, 0xFFFFFFFFFFFFFFFFull);
  std::size_t off = 0;
  EXPECT_EQ(get_u16(out, off), 65535);
  EXPECT_EQ(get_u32(out, off), 0u);
  EXPECT_EQ(get_u64(out, off), 0xFFFFFFFFFFFFFFFFull);
  EXPECT_EQ(off, out.size());

  Bytes one{0x42};
  off = 0;
  EXPECT_EQ(get_u8(one, off), 0x42);
  off = 0;
  expect_error(Errc::malformed_frame, [&] { get_u16(one, off); });
  off = 0;
  expect_error(Errc::malformed_frame, [&] { get_u32(one, off); });
  off = 0;
  expect_error(Errc::malformed_frame, [&] { get_u64(one, off); });
}

TEST(Frame, EncodeLayout) {
  Frame f;
  f.type = MsgType::share_vector;
  f.sender = 0x0102;
  f.payload = {0xAA, 0xBB};
  Bytes enc = encode_frame(f);
  // length(=payload+3) | type | sender | payload
  EXPECT_EQ(enc, (Bytes{0, 0, 0, 5, 1, 0x01, 0x02, 0xAA, 0xBB}));
  EXPECT_EQ(wire_size(f), 9u);
  EXPECT_EQ(kFrameOverhead, 7u);
}

TEST(Frame, RoundTrip) {
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{160},
                        std::size_t{4096}}) {
    Frame f;
    f.type = MsgType::result;
    f.sender = 999;
    f.payload.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      f.payload[i] = static_cast<std::uint8_t>(i * 37);
    }
    Bytes enc = encode_frame(f);
    EXPECT_EQ(enc.size(), kFrameOverhead + n);
    std::size_t consumed = 0;
    Frame back = decode_frame(enc, &consumed);
    EXPECT_EQ(back, f);
    EXPECT_EQ(consumed, enc.size());
  }
}

TEST(Frame, TenShareVectorOccupies167Bytes) {
  // 10 shares x 16 bytes = 160-byte payload; 7 bytes of framing on top.
  Frame f;
  f.type = MsgType::share_vector;
  f.sender = 3;
  f.payload.assign(10 * 16, 0);
  EXPECT_EQ(wire_size(f), 167u);
  Bytes enc = encode_frame(f);
  ASSERT_EQ(enc.size(), 167u);
  // Length field covers type + sender + payload = 163.
  EXPECT_EQ(enc[0], 0);
  EXPECT_EQ(enc[1], 0);
  EXPECT_EQ(enc[2], 0);
  EXPECT_EQ(enc[3], 163);
}

TEST(Frame, MalformedInputs) {
  expect_error(Errc::malformed_frame, [] {
    Bytes shortHeader{0, 0, 0};
    decode_frame(shortHeader);
  });
  expect_error(Errc::malformed_frame, [] {
    Bytes belowMinimum{0, 0, 0, 2, 0, 0};  // length < 3
    decode_frame(belowMinimum);
  });
  expect_error(Errc::malformed_frame, [] {
    Bytes unknownType{0, 0, 0, 3, 8, 0, 0};  // msg_type 8 unregistered
    decode_frame(unknownType);
  });
  expect_error(Errc::malformed_frame, [] {
    Bytes truncated{0, 0, 0, 10, 1, 0, 0, 1, 2};  // claims 7 payload bytes
    decode_frame(truncated);
  });
}

TEST(Frame, StreamOfTwoFrames) {
  Frame a;
  a.type = MsgType::control;
  a.sender = 1;
  a.payload = {9};
  Frame b;
  b.type = MsgType::reveal;
  b.sender = 2;
  b.payload = {0, 7};
  Bytes stream = encode_frame(a);
  Bytes second = encode_frame(b);
  stream.insert(stream.end(), second.begin(), second.end());

  std::size_t consumed = 0;
  Frame first = decode_frame(stream, &consumed);
  EXPECT_EQ(first, a);
  Frame rest = decode_frame(
      std::span<const std::uint8_t>(stream).subspan(consumed), &consumed);
  EXPECT_EQ(rest, b);
}

TEST(ShareCodec, SixteenByteRoundTrip) {
  Share s;
  s.x = 3;
  s.y = FieldElement{0x1FFFFFFFFFFFFFFull};
  s.threshold = 2;
  Bytes out;
  put_share(out, s);
  ASSERT_EQ(out.size(), 16u);
  std::size_t off = 0;
  Share back = get_share(out, off, 2);
  EXPECT_EQ(back.x, s.x);
  EXPECT_EQ(back.y.value, s.y.value);
  EXPECT_EQ(back.threshold, s.threshold);
}

TEST(ShareVectorMsg, RoundTripAndSize) {
  ShareVectorMsg m;
  m.provider = 17;
  m.marginal = 2;
  m.threshold = 1;
  for (std::uint64_t i = 0; i < 10; ++i) {
    m.shares.push_back(Share{i + 1, FieldElement{i * 100}, 1});
  }
  Bytes enc = encode_share_vector(m);
  EXPECT_EQ(enc.size(), 5u + 16u * 10u);
  ShareVectorMsg back = decode_share_vector(enc);
  EXPECT_EQ(back.provider, m.provider);
  EXPECT_EQ(back.marginal, m.marginal);
  EXPECT_EQ(back.threshold, m.threshold);
  ASSERT_EQ(back.shares.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(back.shares[i].x, m.shares[i].x);
    EXPECT_EQ(back.shares[i].y.value, m.shares[i].y.value);
    EXPECT_EQ(back.shares[i].threshold, 1u);
  }

  enc.push_back(0);  // no longer a multiple of 16 past the header
  expect_error(Errc::malformed_frame, [&] { decode_share_vector(enc); });
}

TEST(AggregateShareMsg, RoundTripAndSize) {
  AggregateShareMsg m;
  m.marginal = 4;
  m.threshold = 2;
  m.shares.push_back(Share{1, FieldElement{7}, 2});
  m.shares.push_back(Share{2, FieldElement{9}, 2});
  Bytes enc = encode_aggregate_share(m);
  EXPECT_EQ(enc.size(), 3u + 32u);
  AggregateShareMsg back = decode_aggregate_share(enc);
  EXPECT_EQ(back.marginal, 4);
  EXPECT_EQ(back.threshold, 2);
  ASSERT_EQ(back.shares.size(), 2u);
  EXPECT_EQ(back.shares[1].y.value, 9u);

  enc.resize(enc.size() - 1);
  expect_error(Errc::malformed_frame, [&] { decode_aggregate_share(enc); });
}

TEST(SelectionMsg, SeventeenBytes) {
  SelectionMsg m;
  m.threshold = 1;
  m.share = Share{2, FieldElement{123456789}, 1};
  Bytes enc = encode_selection(m);
  ASSERT_EQ(enc.size(), 17u);
  SelectionMsg back = decode_selection(enc);
  EXPECT_EQ(back.threshold, 1);
  EXPECT_EQ(back.share.x, 2u);
  EXPECT_EQ(back.share.y.value, 123456789u);

  enc.push_back(0);
  expect_error(Errc::malformed_frame, [&] { decode_selection(enc); });
  enc.resize(12);
  expect_error(Errc::malformed_frame, [&] { decode_selection(enc); });
}

TEST(AttestationMsg, RequestIsNineBytes) {
  AttestationMsg m;
  m.kind = AttestationKind::request;
  m.nonce = 0xCAFEBABEDEADBEEFull;
  Bytes enc = encode_attestation(m);
  ASSERT_EQ(enc.size(), 9u);
  AttestationMsg back = decode_attestation(enc);
  EXPECT_EQ(back.kind, AttestationKind::request);
  EXPECT_EQ(back.nonce, m.nonce);
}

TEST(AttestationMsg, ReportIsSeventyThreeBytes) {
  AttestationMsg m;
  m.kind = AttestationKind::report;
  m.nonce = 42;
  m.measurement = sha256("manifest");
  m.session_key = sha256("session");
  Bytes enc = encode_attestation(m);
  ASSERT_EQ(enc.size(), 73u);
  AttestationMsg back = decode_attestation(enc);
  EXPECT_EQ(back.kind, AttestationKind::report);
  EXPECT_EQ(back.nonce, 42u);
  EXPECT_EQ(back.measurement, m.measurement);
  EXPECT_EQ(back.session_key, m.session_key);

  Bytes badKind = enc;
  badKind[0] = 2;
  expect_error(Errc::malformed_frame, [&] { decode_attestation(badKind); });
  Bytes truncated(enc.begin(), enc.end() - 1);
  expect_error(Errc::malformed_frame, [&] { decode_attestation(truncated); });
  Bytes trailing = enc;
  trailing.push_back(0);
  expect_error(Errc::malformed_frame, [&] { decode_attestation(trailing); });
}

TEST(RevealCmdMsg, TwoBytes) {
  RevealCmdMsg m;
  m.chosen = 0x0305;
  Bytes enc = encode_reveal_cmd(m);
  EXPECT_EQ(enc, (Bytes{3, 5}));
  EXPECT_EQ(decode_reveal_cmd(enc).chosen, 0x0305);
  enc.push_back(1);
  expect_error(Errc::malformed_frame, [&] { decode_reveal_cmd(enc); });
}

TEST(Digest, Sha256KnownAnswers) {
  EXPECT_EQ(hex_digest(sha256("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(hex_digest(sha256("")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

}  // namespace
}  // namespace podsyn
