#include "dpcflow/workflow/fabric.hpp"

#include <chrono>
#include <thread>

namespace dpcflow::wf {

void FabricCosts::validate() const {
  // Rates strictly positive (infinity expresses a free fabric); the base
  // latency may be zero for the same reason.
  if (base_latency_us < 0.0 || !(bandwidth_bytes_per_s > 0.0) ||
      !(serialize_bytes_per_s > 0.0) || !(deserialize_bytes_per_s > 0.0)) {
    throw std::invalid_argument("FabricCosts: rates must be strictly positive");
  }
}

double FabricCosts::serialize_us(long long bytes) const {
  return 1e6 * static_cast<double>(bytes) / serialize_bytes_per_s;
}

double FabricCosts::deserialize_us(long long bytes) const {
  return 1e6 * static_cast<double>(bytes) / deserialize_bytes_per_s;
}

double FabricCosts::transfer_us(long long bytes) const {
  return base_latency_us + 1e6 * static_cast<double>(bytes) / bandwidth_bytes_per_s;
}

double FabricCosts::edge_cost_us(long long bytes) const {
  return serialize_us(bytes) + deserialize_us(bytes) + transfer_us(bytes);
}

void Registry::put(const std::string& key, const std::string& value) {
  std::lock_guard lock(mu_);
  entries_[key] = value;
}

std::optional<std::string> Registry::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Registry::get_with_retry(const std::string& key,
                                                    int attempts,
                                                    int backoff_ms) const {
  for (int i = 0; i < attempts; ++i) {
    if (auto v = get(key)) return v;
    std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
  }
  return std::nullopt;
}

size_t Registry::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

Message encode_factors(int sender, std::uint64_t round, const linalg::SvdFactors& f) {
  Message m;
  m.header.kind = static_cast<std::uint16_t>(MsgKind::Factors);
  m.header.sender = static_cast<std::uint32_t>(sender);
  m.header.round = round;
  const auto rows = static_cast<std::uint32_t>(f.rows());
  const auto rank = static_cast<std::uint32_t>(f.rank());
  const auto cols = static_cast<std::uint32_t>(f.cols());
  m.header.dims[0] = rows;
  m.header.dims[1] = rank;
  m.header.dims[2] = cols;
  m.header.dims[3] = f.degenerate ? 1 : 0;
  m.payload.resize(static_cast<size_t>(rows) * rank + rank +
                   static_cast<size_t>(cols) * rank);
  double* p = m.payload.data();
  Eigen::Map<Eigen::MatrixXd>(p, rows, rank) = f.m_left;
  p += static_cast<size_t>(rows) * rank;
  Eigen::Map<Eigen::VectorXd>(p, rank) = f.s;
  p += rank;
  Eigen::Map<Eigen::MatrixXd>(p, cols, rank) = f.n_right;
  m.header.payload_len = m.payload.size();
  return m;
}

linalg::SvdFactors decode_factors(const Message& m) {
  if (m.kind() != MsgKind::Factors) {
    throw std::runtime_error("decode_factors: wrong message kind");
  }
  const auto rows = m.header.dims[0];
  const auto rank = m.header.dims[1];
  const auto cols = m.header.dims[2];
  const size_t need = static_cast<size_t>(rows) * rank + rank +
                      static_cast<size_t>(cols) * rank;
  if (m.payload.size() != need) {
    throw std::runtime_error("decode_factors: truncated frame");
  }
  linalg::SvdFactors f;
  const double* p = m.payload.data();
  f.m_left = Eigen::Map<const Eigen::MatrixXd>(p, rows, rank);
  p += static_cast<size_t>(rows) * rank;
  f.s = Eigen::Map<const Eigen::VectorXd>(p, rank);
  p += rank;
  f.n_right = Eigen::Map<const Eigen::MatrixXd>(p, cols, rank);
  f.degenerate = m.header.dims[3] != 0;
  return f;
}

Message encode_vectors(MsgKind kind, int sender, std::uint64_t round,
                       const std::vector<Eigen::VectorXd>& vs) {
  if (vs.size() > 6) throw std::invalid_argument("encode_vectors: too many sections");
  Message m;
  m.header.kind = static_cast<std::uint16_t>(kind);
  m.header.sender = static_cast<std::uint32_t>(sender);
  m.header.round = round;
  m.header.dims[6] = static_cast<std::uint32_t>(vs.size());
  size_t total = 0;
  for (size_t i = 0; i < vs.size(); ++i) {
    m.header.dims[i] = static_cast<std::uint32_t>(vs[i].size());
    total += vs[i].size();
  }
  m.payload.resize(total);
  double* p = m.payload.data();
  for (const auto& v : vs) {
    Eigen::Map<Eigen::VectorXd>(p, v.size()) = v;
    p += v.size();
  }
  m.header.payload_len = m.payload.size();
  return m;
}

std::vector<Eigen::VectorXd> decode_vectors(const Message& m) {
  std::vector<Eigen::VectorXd> out;
  const double* p = m.payload.data();
  size_t used = 0;
  const int count = static_cast<int>(m.header.dims[6]);
  for (int i = 0; i < count; ++i) {
    const auto len = m.header.dims[i];
    if (used + len > m.payload.size()) throw std::runtime_error("decode_vectors: truncated frame");
    out.emplace_back(Eigen::Map<const Eigen::VectorXd>(p, len));
    p += len;
    used += len;
  }
  return out;
}

void Channel::push(Message m) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    q_.push_back(std::move(m));
  }
  cv_.notify_one();
}

std::optional<Message> Channel::pop(int timeout_ms) {
  std::unique_lock lock(mu_);
  if (!cv_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
                    [&] { return !q_.empty() || closed_; })) {
    return std::nullopt;
  }
  if (q_.empty()) return std::nullopt;  // closed
  Message m = std::move(q_.front());
  q_.pop_front();
  return m;
}

void Channel::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::shared_ptr<Channel> ChannelHub::open(const std::string& from, const std::string& to) {
  std::lock_guard lock(mu_);
  auto& ch = channels_[{from, to}];
  if (!ch) ch = std::make_shared<Channel>();
  return ch;
}

std::vector<std::pair<std::string, std::string>> ChannelHub::edges() const {
  std::lock_guard lock(mu_);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(channels_.size());
  for (const auto& [key, ch] : channels_) out.push_back(key);
  return out;
}

void ChannelHub::close_all() {
  std::lock_guard lock(mu_);
  for (auto& [key, ch] : channels_) ch->close();
}

void MessageLog::record(Event e, int task_id, std::uint64_t round) {
  std::lock_guard lock(mu_);
  entries_.push_back({next_seq_++, e, task_id, round});
}

std::vector<MessageLog::Entry> MessageLog::snapshot() const {
  std::lock_guard lock(mu_);
  return entries_;
}

PyramidBarrier::PyramidBarrier(int expected, Registry* registry, MessageLog* log,
                               std::string key_prefix)
    : expected_(expected), registry_(registry), log_(log), prefix_(std::move(key_prefix)) {}

void PyramidBarrier::post_ready(int task_id) {
  if (registry_) registry_->put(prefix_ + "/ready/task_" + std::to_string(task_id), "1");
  if (log_) log_->record(MessageLog::Event::Ready, task_id);
  {
    std::lock_guard lock(mu_);
    ready_++;
  }
  cv_ready_.notify_all();
}

void PyramidBarrier::await_all_and_start(double deadline_s) {
  std::unique_lock lock(mu_);
  const bool ok = cv_ready_.wait_for(
      lock, std::chrono::duration<double>(deadline_s), [&] { return ready_ >= expected_; });
  if (!ok) throw BarrierTimeoutError(ready_, expected_);
  started_ = true;
  if (registry_) registry_->put(prefix_ + "/start", "1");
  if (log_) log_->record(MessageLog::Event::StartBroadcast, 0);
  cv_start_.notify_all();
}

bool PyramidBarrier::wait_start() {
  std::unique_lock lock(mu_);
  cv_start_.wait(lock, [&] { return started_ || aborted_; });
  return started_;
}

void PyramidBarrier::abort() {
  {
    std::lock_guard lock(mu_);
    aborted_ = true;
  }
  cv_start_.notify_all();
}

bool PyramidBarrier::started() const {
  std::lock_guard lock(mu_);
  return started_;
}

int PyramidBarrier::ready_count() const {
  std::lock_guard lock(mu_);
  return ready_;
}

}  // namespace dpcflow::wf
