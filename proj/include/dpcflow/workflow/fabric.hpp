#pragma once

#include <Eigen/Dense>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpcflow/linalg/svd.hpp"

namespace dpcflow::wf {

/// Cost model of the non-computation parts of a task: receiving and sending
/// data, serialization and deserialization. Per edge, the modeled overhead is
///   bytes * (1/serialize_rate + 1/deserialize_rate + 1/bandwidth) + base.
struct FabricCosts {
  double base_latency_us = 50.0;
  double bandwidth_bytes_per_s = 1.25e9;
  double serialize_bytes_per_s = 4.0e9;
  double deserialize_bytes_per_s = 4.0e9;

  void validate() const;
  double serialize_us(long long bytes) const;
  double deserialize_us(long long bytes) const;
  double transfer_us(long long bytes) const;  // wire + base latency
  double edge_cost_us(long long bytes) const;
};

/// Thread-safe key-value store standing in for the shared dictionary server:
/// keys unique, writes last-wins.
class Registry {
 public:
  void put(const std::string& key, const std::string& value);
  std::optional<std::string> get(const std::string& key) const;
  /// Retrying read for address resolution during worker initialization.
  std::optional<std::string> get_with_retry(const std::string& key, int attempts,
                                            int backoff_ms) const;
  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

enum class MsgKind : std::uint16_t {
  Sample = 1,        // warm-up pair broadcast
  Round = 2,         // DPC round trigger with (u_prev, y, r_f)
  Factors = 3,       // truncated SVD factors
  Packet = 4,        // final cloud packet (export -> engine)
  WarmupControl = 5, // router's pre-controller output
  Error = 6,
  Stop = 7,
};

/// Length-prefixed binary frame: 64-byte header plus a payload of fixed-width
/// 8-byte reals. Stale frames are rejected by (sender, round).
struct MessageHeader {
  std::uint32_t magic = 0x44504357;  // "DPCW"
  std::uint16_t version = 1;
  std::uint16_t kind = 0;
  std::uint32_t sender = 0;
  std::uint32_t reserved = 0;
  std::uint64_t round = 0;
  std::uint64_t payload_len = 0;  // number of doubles
  std::uint32_t dims[7] = {0, 0, 0, 0, 0, 0, 0};
};
static_assert(sizeof(MessageHeader) == 64, "header must serialize to 64 bytes");

struct Message {
  MessageHeader header;
  std::vector<double> payload;

  MsgKind kind() const { return static_cast<MsgKind>(header.kind); }
  long long wire_bytes() const {
    return 64 + static_cast<long long>(payload.size()) * 8;
  }
};

Message encode_factors(int sender, std::uint64_t round, const linalg::SvdFactors& f);
linalg::SvdFactors decode_factors(const Message& m);
Message encode_vectors(MsgKind kind, int sender, std::uint64_t round,
                       const std::vector<Eigen::VectorXd>& vs);
std::vector<Eigen::VectorXd> decode_vectors(const Message& m);

/// Point-to-point FIFO channel between two tasks.
class Channel {
 public:
  void push(Message m);
  std::optional<Message> pop(int timeout_ms);
  void close();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Message> q_;
  bool closed_ = false;
};

/// Channel endpoints looked up by (from, to) logical address pair; created on
/// first open so both sides resolve the same object.
class ChannelHub {
 public:
  std::shared_ptr<Channel> open(const std::string& from, const std::string& to);
  std::vector<std::pair<std::string, std::string>> edges() const;
  void close_all();

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<Channel>> channels_;
};

/// Ordered record of barrier and send events, for auditing that no task
/// message predates the start broadcast.
class MessageLog {
 public:
  enum class Event { Ready, StartBroadcast, TaskSend };
  struct Entry {
    long long seq;
    Event event;
    int task_id;
    std::uint64_t round;
  };

  void record(Event e, int task_id, std::uint64_t round = 0);
  std::vector<Entry> snapshot() const;

 private:
  mutable std::mutex mu_;
  long long next_seq_ = 0;
  std::vector<Entry> entries_;
};

struct BarrierTimeoutError : std::runtime_error {
  BarrierTimeoutError(int ready_, int expected_)
      : std::runtime_error("pyramid barrier: timeout with " + std::to_string(ready_) +
                           "/" + std::to_string(expected_) + " workers ready"),
        ready(ready_),
        expected(expected_) {}
  int ready;
  int expected;
};

/// Registry-mediated ready/start handshake: every worker posts `ready`, the
/// coordinator acknowledges all of them, then broadcasts `start` once. No
/// task executes user logic before the broadcast.
class PyramidBarrier {
 public:
  PyramidBarrier(int expected, Registry* registry, MessageLog* log,
                 std::string key_prefix);

  void post_ready(int task_id);                 // worker side
  void await_all_and_start(double deadline_s);  // coordinator side
  bool wait_start();                            // worker side; false if aborted
  void abort();                                 // release waiters on teardown
  bool started() const;
  int ready_count() const;

 private:
  int expected_;
  Registry* registry_;
  MessageLog* log_;
  std::string prefix_;
  mutable std::mutex mu_;
  std::condition_variable cv_ready_, cv_start_;
  int ready_ = 0;
  bool started_ = false;
  bool aborted_ = false;
};

}  // namespace dpcflow::wf
