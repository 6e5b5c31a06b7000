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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "podsyn/error.hpp"
#include "podsyn/net.hpp"
#include "podsyn/wire.hpp"

namespace podsyn {

// Localhost TCP transport. Every endpoint listens on an ephemeral port; a
// directed link opens one connection on first use and keeps it. Each
// accepted connection gets a reader thread; handler invocations are
// serialised per endpoint. Quiescence is tracked by two counters: a frame is
// "sent" once its bytes are on the wire and "processed" once its handler has
// returned, and handlers are the only source of new sends while the driver
// waits, so sent == processed means no work is pending or running.
class SocketNetwork : public Network {
 public:
  SocketNetwork() {
    current_.phase = "init";
    phase_start_ = std::chrono::steady_clock::now();
  }

  ~SocketNetwork() override { close_all(); }

  SocketNetwork(const SocketNetwork&) = delete;
  SocketNetwork& operator=(const SocketNetwork&) = delete;

  void register_endpoint(std::uint16_t id, Handler handler) override {
    std::lock_guard<std::mutex> lk(setup_mu_);
    require(!endpoints_.contains(id), Errc::config_invalid,
            "endpoint " + std::to_string(id) + " already registered");
    auto ep = std::make_unique<Endpoint>();
    ep->id = id;
    ep->handler = std::move(handler);

    ep->listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
    require(ep->listen_fd >= 0, Errc::unknown_endpoint, "socket() failed");
    int one = 1;
    ::setsockopt(ep->listen_fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    require(::bind(ep->listen_fd, reinterpret_cast<sockaddr*>(&addr),
                   sizeof(addr)) == 0,
            Errc::unknown_endpoint, "bind() failed");
    socklen_t len = sizeof(addr);
    ::getsockname(ep->listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ep->port = ntohs(addr.sin_port);
    require(::listen(ep->listen_fd, 64) == 0, Errc::unknown_endpoint,
            "listen() failed");

    Endpoint* raw = ep.get();
    ep->acceptor = std::thread([this, raw] { accept_loop(raw); });
    endpoints_[id] = std::move(ep);
  }

  void send(std::uint16_t from, std::uint16_t to, const Frame& frame) override {
    int fd = connection(from, to);
    std::vector<std::uint8_t> bytes = encode_frame(frame);
    // Counted as sent before the bytes can possibly be processed, so
    // processed_ never overtakes sent_.
    sent_.fetch_add(1, std::memory_order_acq_rel);
    {
      // One writer mutex per link keeps frames contiguous on the stream.
      std::lock_guard<std::mutex> lk(*link_mutex(from, to));
      write_all(fd, bytes.data(), bytes.size());
    }
    {
      std::lock_guard<std::mutex> lk(ledger_mu_);
      current_.sent_bytes[from] += bytes.size();
      current_.global_bytes += bytes.size();
    }
  }

  void flush() override {
    // processed_ is read before sent_: if both readings agree, every frame
    // that was on the wire at that instant had already been handled.
    for (;;) {
      std::uint64_t p = processed_.load(std::memory_order_acquire);
      std::uint64_t s = sent_.load(std::memory_order_acquire);
      if (p == s) break;
      std::this_thread::sleep_for(std::chrono::microseconds(200));
    }
    std::lock_guard<std::mutex> lk(ledger_mu_);
    require(handler_error_.empty(), Errc::consistency_violation,
            "handler failed: " + handler_error_);
  }

  void advance_round() override {
    flush();
    std::lock_guard<std::mutex> lk(ledger_mu_);
    ++current_.rounds;
  }

  void reset_phase(const std::string& name) override {
    require(quiescent(), Errc::snapshot_with_inflight_frames,
            "phase reset with frames in flight");
    std::lock_guard<std::mutex> lk(ledger_mu_);
    current_ = PhaseMetrics{};
    current_.phase = name;
    phase_start_ = std::chrono::steady_clock::now();
  }

  PhaseMetrics snapshot() override {
    require(quiescent(), Errc::snapshot_with_inflight_frames,
            "snapshot with frames in flight");
    std::lock_guard<std::mutex> lk(ledger_mu_);
    PhaseMetrics out = current_;
    out.time_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - phase_start_)
                      .count();
    return out;
  }

  const std::vector<TranscriptEntry>& transcript() const override {
    // Callers inspect transcripts only at quiescent points.
    return transcript_;
  }

  // Joins all worker threads; called by the destructor.
  void close_all() {
    {
      std::lock_guard<std::mutex> lk(setup_mu_);
      if (closed_) return;
      closed_ = true;
    }
    for (auto& [id, ep] : endpoints_) {
      ::shutdown(ep->listen_fd, SHUT_RDWR);
      ::close(ep->listen_fd);
    }
    {
      std::lock_guard<std::mutex> lk(conns_mu_);
      for (auto& [link, fd] : conns_) {
        ::shutdown(fd, SHUT_RDWR);
      }
    }
    for (auto& [id, ep] : endpoints_) {
      if (ep->acceptor.joinable()) ep->acceptor.join();
      {
        std::lock_guard<std::mutex> lk(ep->conn_mu);
        for (int fd : ep->accepted_fds) ::shutdown(fd, SHUT_RDWR);
      }
      for (std::thread& t : ep->readers) {
        if (t.joinable()) t.join();
      }
    }
    {
      std::lock_guard<std::mutex> lk(conns_mu_);
      for (auto& [link, fd] : conns_) ::close(fd);
      conns_.clear();
    }
  }

 private:
  struct Endpoint {
    std::uint16_t id = 0;
    Handler handler;
    int listen_fd = -1;
    std::uint16_t port = 0;
    std::thread acceptor;
    std::vector<std::thread> readers;
    std::vector<int> accepted_fds;
    std::mutex conn_mu;
    std::mutex dispatch_mu;  // serialises handler calls for this endpoint
  };

  void accept_loop(Endpoint* ep) {
    for (;;) {
      int fd = ::accept(ep->listen_fd, nullptr, nullptr);
      if (fd < 0) return;  // listener closed
      std::lock_guard<std::mutex> lk(ep->conn_mu);
      ep->accepted_fds.push_back(fd);
      ep->readers.emplace_back([this, ep, fd] { read_loop(ep, fd); });
    }
  }

  void read_loop(Endpoint* ep, int fd) {
    std::vector<std::uint8_t> buf;
    for (;;) {
      std::uint8_t head[4];
      if (!read_exact(fd, head, 4)) break;
      std::uint32_t length = (std::uint32_t(head[0]) << 24) |
                             (std::uint32_t(head[1]) << 16) |
                             (std::uint32_t(head[2]) << 8) |
                             std::uint32_t(head[3]);
      buf.assign(4 + length, 0);
      std::memcpy(buf.data(), head, 4);
      if (!read_exact(fd, buf.data() + 4, length)) break;
      Frame frame = decode_frame(buf);
      {
        std::lock_guard<std::mutex> lk(ep->dispatch_mu);
        try {
          ep->handler(frame);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> elk(ledger_mu_);
          if (handler_error_.empty()) handler_error_ = e.what();
        }
      }
      {
        std::lock_guard<std::mutex> lk(ledger_mu_);
        std::uint32_t bytes = static_cast<std::uint32_t>(wire_size(frame));
        current_.recv_bytes[ep->id] += bytes;
        transcript_.push_back(TranscriptEntry{next_seq_++, frame.sender,
                                              ep->id, frame.type, bytes,
                                              frame.payload});
      }
      processed_.fetch_add(1, std::memory_order_acq_rel);
    }
    ::close(fd);
  }

  static bool read_exact(int fd, std::uint8_t* dst, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
      ssize_t r = ::read(fd, dst + got, n - got);
      if (r <= 0) return false;
      got += static_cast<std::size_t>(r);
    }
    return true;
  }

  static void write_all(int fd, const std::uint8_t* src, std::size_t n) {
    std::size_t sent = 0;
    while (sent < n) {
      ssize_t w = ::write(fd, src + sent, n - sent);
      require(w > 0, Errc::unknown_endpoint, "socket write failed");
      sent += static_cast<std::size_t>(w);
    }
  }

  int connection(std::uint16_t from, std::uint16_t to) {
    {
      std::lock_guard<std::mutex> lk(setup_mu_);
      require(endpoints_.contains(from), Errc::unknown_endpoint,
              "unknown sender " + std::to_string(from));
      require(endpoints_.contains(to), Errc::unknown_endpoint,
              "unknown receiver " + std::to_string(to));
    }
    std::lock_guard<std::mutex> lk(conns_mu_);
    auto key = std::make_pair(from, to);
    if (auto it = conns_.find(key); it != conns_.end()) return it->second;

    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    require(fd >= 0, Errc::unknown_endpoint, "socket() failed");
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(endpoints_.at(to)->port);
    require(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) ==
                0,
            Errc::unknown_endpoint, "connect() failed");
    conns_[key] = fd;
    return fd;
  }

  std::mutex* link_mutex(std::uint16_t from, std::uint16_t to) {
    std::lock_guard<std::mutex> lk(conns_mu_);
    auto key = std::make_pair(from, to);
    auto it = link_mus_.find(key);
    if (it == link_mus_.end()) {
      it = link_mus_.emplace(key, std::make_unique<std::mutex>()).first;
    }
    return it->second.get();
  }

  bool quiescent() {
    std::uint64_t p = processed_.load(std::memory_order_acquire);
    std::uint64_t s = sent_.load(std::memory_order_acquire);
    return p == s;
  }

  std::mutex setup_mu_;
  bool closed_ = false;
  std::map<std::uint16_t, std::unique_ptr<Endpoint>> endpoints_;

  std::mutex conns_mu_;
  std::map<std::pair<std::uint16_t, std::uint16_t>, int> conns_;
  std::map<std::pair<std::uint16_t, std::uint16_t>,
           std::unique_ptr<std::mutex>>
      link_mus_;

  std::mutex ledger_mu_;
  PhaseMetrics current_;
  std::vector<TranscriptEntry> transcript_;
  std::string handler_error_;
  std::uint64_t next_seq_ = 0;
  std::chrono::steady_clock::time_point phase_start_;

  std::atomic<std::uint64_t> sent_{0};
  std::atomic<std::uint64_t> processed_{0};
};

}  // namespace podsyn
