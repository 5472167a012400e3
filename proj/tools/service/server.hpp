#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "headteleop/config.hpp"
#include "headteleop/episode.hpp"

namespace headteleop::service {

class BindFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Summary handed out when a client session ends.
struct SessionSummary {
  std::uint64_t id = 0;
  TaskMetrics metrics;
  RobotState final_robot;
  std::string trace_path;  // empty when not recording
  std::uint64_t frames_accepted = 0;
  std::uint64_t frames_dropped = 0;
};

/// Websocket endpoint. Each client gets its own Episode (calibration, mode,
/// robot and scenario instance); clients share nothing but the immutable
/// configuration.
class Server {
 public:
  explicit Server(ServiceConfig cfg);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting. Port 0 picks an ephemeral port. Throws
  /// BindFailure.
  void start();

  /// Blocks running the event loop until stop().
  void run();

  /// start() + run() on a background thread.
  void run_in_background();

  void stop();

  std::uint16_t port() const { return port_; }
  std::size_t active_sessions() const;

  /// Called from the event loop thread whenever a session closes.
  void on_session_closed(std::function<void(const SessionSummary&)> cb);

  struct Impl;

 private:
  ServiceConfig cfg_;
  std::unique_ptr<Impl> impl_;
  std::uint16_t port_ = 0;
  std::thread thread_;
};

}  // namespace headteleop::service
