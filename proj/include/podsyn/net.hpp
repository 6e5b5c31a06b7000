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
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "podsyn/error.hpp"
#include "podsyn/rng.hpp"
#include "podsyn/wire.hpp"

namespace podsyn {

// One delivered frame, in delivery order. Payloads are retained so
// transcripts can be audited after a run.
struct TranscriptEntry {
  std::uint64_t seq = 0;
  std::uint16_t from = 0;
  std::uint16_t to = 0;
  MsgType type = MsgType::control;
  std::uint32_t bytes = 0;  // full frame size on the wire
  std::vector<std::uint8_t> payload;
};

// Per-phase communication accounting. local data for an endpoint counts
// bytes it sent plus bytes it received; global data counts every directed
// link once.
struct PhaseMetrics {
  std::string phase;
  double time_ms = 0.0;
  std::uint64_t rounds = 0;
  std::map<std::uint16_t, std::uint64_t> sent_bytes;
  std::map<std::uint16_t, std::uint64_t> recv_bytes;
  std::uint64_t global_bytes = 0;

  std::uint64_t local_bytes(std::uint16_t id) const {
    std::uint64_t total = 0;
    if (auto it = sent_bytes.find(id); it != sent_bytes.end())
      total += it->second;
    if (auto it = recv_bytes.find(id); it != recv_bytes.end())
      total += it->second;
    return total;
  }
};

// Message transport with metrics. Two implementations share this interface:
// a single-threaded deterministic scheduler and a localhost socket
// transport. Rounds are counted only by explicit advance_round() calls,
// which the protocol driver issues after each synchronous player exchange;
// flush() is the same barrier without the count.
class Network {
 public:
  using Handler = std::function<void(const Frame&)>;

  virtual ~Network() = default;

  virtual void register_endpoint(std::uint16_t id, Handler handler) = 0;
  virtual void send(std::uint16_t from, std::uint16_t to,
                    const Frame& frame) = 0;
  virtual void flush() = 0;
  virtual void advance_round() = 0;
  virtual void reset_phase(const std::string& name) = 0;
  virtual PhaseMetrics snapshot() = 0;
  virtual const std::vector<TranscriptEntry>& transcript() const = 0;
};

// In-process transport. Frames queue per directed link; delivery interleaves
// links in a seeded order, so a fixed seed yields a fixed frame-by-frame
// transcript. Handlers run inline and may send further frames.
class DeterministicNetwork : public Network {
 public:
  explicit DeterministicNetwork(std::uint64_t seed)
      : rng_(derive_seed(seed, "net")) {
    current_.phase = "init";
  }

  void register_endpoint(std::uint16_t id, Handler handler) override {
    require(!endpoints_.contains(id), Errc::config_invalid,
            "endpoint " + std::to_string(id) + " already registered");
    endpoints_[id] = std::move(handler);
  }

  void send(std::uint16_t from, std::uint16_t to, const Frame& frame) override {
    require(endpoints_.contains(from), Errc::unknown_endpoint,
            "unknown sender " + std::to_string(from));
    require(endpoints_.contains(to), Errc::unknown_endpoint,
            "unknown receiver " + std::to_string(to));
    std::uint64_t bytes = wire_size(frame);
    current_.sent_bytes[from] += bytes;
    current_.global_bytes += bytes;
    queues_[{from, to}].push_back(frame);
    ++inflight_;
  }

  void flush() override {
    while (inflight_ > 0) {
      std::vector<std::pair<std::uint16_t, std::uint16_t>> ready;
      for (const auto& [link, q] : queues_) {
        if (!q.empty()) ready.push_back(link);
      }
      auto link = ready[rng_.next_below(ready.size())];
      Frame frame = std::move(queues_[link].front());
      queues_[link].pop_front();
      --inflight_;

      std::uint32_t bytes = static_cast<std::uint32_t>(wire_size(frame));
      current_.recv_bytes[link.second] += bytes;
      transcript_.push_back(TranscriptEntry{next_seq_++, link.first,
                                            link.second, frame.type, bytes,
                                            frame.payload});
      endpoints_.at(link.second)(frame);
    }
  }

  void advance_round() override {
    flush();
    ++current_.rounds;
  }

  void reset_phase(const std::string& name) override {
    require(inflight_ == 0, Errc::snapshot_with_inflight_frames,
            "phase reset with undelivered frames");
    current_ = PhaseMetrics{};
    current_.phase = name;
  }

  PhaseMetrics snapshot() override {
    require(inflight_ == 0, Errc::snapshot_with_inflight_frames,
            "snapshot with undelivered frames");
    return current_;  // time_ms stays 0: virtual time in deterministic mode
  }

  const std::vector<TranscriptEntry>& transcript() const override {
    return transcript_;
  }

 private:
  std::map<std::uint16_t, Handler> endpoints_;
  std::map<std::pair<std::uint16_t, std::uint16_t>, std::deque<Frame>> queues_;
  std::size_t inflight_ = 0;
  Rng rng_;
  PhaseMetrics current_;
  std::vector<TranscriptEntry> transcript_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace podsyn
