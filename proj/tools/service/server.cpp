#include "server.hpp"

#include <boost/asio/dispatch.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "headteleop/trace.hpp"
#include "wire.hpp"

namespace headteleop::service {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using Clock = std::chrono::steady_clock;

namespace {

constexpr auto kSnapshotPeriod = std::chrono::milliseconds(kTickPeriodMs);
// A client clock that leaps further than this is treated as a protocol error.
constexpr std::uint32_t kMaxTimeJumpMs = 10'000;

std::int64_t unix_ms_now() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

class ClientSession;

struct Server::Impl {
  Impl(const ServiceConfig& c, Scenario sc)
      : cfg(c), scenario(std::move(sc)), hash(config_hash(c.session, c.limits)) {}

  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::optional<net::signal_set> signals;
  ServiceConfig cfg;
  Scenario scenario;
  std::string hash;
  std::uint64_t next_id = 1;
  std::map<std::uint64_t, std::weak_ptr<ClientSession>> sessions;
  std::function<void(const SessionSummary&)> on_closed;
  std::atomic<std::size_t> active{0};
  bool stopping = false;

  void do_accept();
  void close_all();
};

class ClientSession : public std::enable_shared_from_this<ClientSession> {
 public:
  ClientSession(tcp::socket&& socket, Server::Impl& server, std::uint64_t id)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        server_(server),
        id_(id),
        episode_(server.scenario, server.cfg.session, server.cfg.limits, server.cfg.strict_gating) {
    episode_.set_tick_observer([this](const TickInfo& info) { on_tick(info); });
  }

  void run() {
    net::dispatch(ws_.get_executor(), [self = shared_from_this()] { self->on_run(); });
  }

  // Runs on the session's executor.
  void close(std::string_view reason = {}) {
    if (closed_) return;
    closed_ = true;
    timer_.cancel();

    if (!reason.empty()) {
      wire::TextMessage err{std::string(wire::kError), {}};
      err.add("reason", std::string(reason));
      send_text(wire::encode(err));
    }

    // Settle ticks up to the last received sample.
    episode_.advance_to(last_t_);
    if (recorder_) {
      recorder_->flush();
      trace_file_.close();
    }
    SessionSummary summary;
    summary.id = id_;
    summary.metrics = episode_.metrics();
    summary.final_robot = episode_.world().robot;
    summary.trace_path = trace_path_;
    summary.frames_accepted = reader_.stats().accepted;
    summary.frames_dropped = reader_.stats().corrupt + reader_.stats().stale;
    server_.active.fetch_sub(1);
    server_.sessions.erase(id_);
    if (server_.on_closed) server_.on_closed(summary);

    close_pending_ = true;
    if (outbox_.empty()) finish_close();
  }

 private:
  void on_run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void on_accept(beast::error_code ec) {
    if (ec) {
      close();
      return;
    }
    open_trace();
    wire::TextMessage hello{std::string(wire::kHello), {}};
    hello.add("session", std::to_string(id_));
    hello.add("scenario", server_.scenario.id);
    hello.add("cfg", server_.hash);
    hello.add("strict_gating", server_.cfg.strict_gating ? "1" : "0");
    send_text(wire::encode(hello));
    send_text(wire::encode(wire::mode_notice(episode_.session())));

    next_snapshot_ = Clock::now() + kSnapshotPeriod;
    arm_timer();
    do_read();
  }

  void open_trace() {
    if (server_.cfg.trace_dir.empty()) return;
    std::error_code fs_ec;
    std::filesystem::create_directories(server_.cfg.trace_dir, fs_ec);
    const auto start = unix_ms_now();
    trace_path_ = (std::filesystem::path(server_.cfg.trace_dir) /
                   ("session-" + std::to_string(start) + "-" + std::to_string(id_) + ".trace"))
                      .string();
    trace_file_.open(trace_path_);
    if (!trace_file_) {
      std::cerr << "warning: cannot record trace to " << trace_path_ << '\n';
      trace_path_.clear();
      return;
    }
    recorder_ = std::make_unique<TraceRecorder>(
        trace_file_, TraceHeader{server_.scenario.id, server_.hash, start});
  }

  void record(const TraceRecord& r) {
    if (recorder_) recorder_->append(r);
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec) {
    if (closed_) return;
    if (ec) {
      close();
      return;
    }
    const auto data = buffer_.cdata();
    const std::string payload(static_cast<const char*>(data.data()), data.size());
    buffer_.consume(buffer_.size());

    if (ws_.got_binary()) {
      on_frame(payload);
    } else {
      on_text(payload);
    }
    if (!closed_) do_read();
  }

  void on_frame(const std::string& payload) {
    const auto bytes = std::as_bytes(std::span(payload.data(), payload.size()));
    auto sample = reader_.accept(bytes);
    if (!sample) return;  // corrupt or stale, dropped

    if (!t0_) t0_ = sample->t_ms;
    std::uint32_t rel = sample->t_ms >= *t0_ ? sample->t_ms - *t0_ : last_t_;
    if (rel < last_t_) rel = last_t_;
    if (rel - last_t_ > kMaxTimeJumpMs) {
      close("time_jump");
      return;
    }
    last_t_ = rel;
    last_frame_wall_ = Clock::now();
    have_frame_ = true;

    sample->t_ms = rel;
    const OrientationSample s = canonical_sample(*sample);
    const bool awaiting_before = episode_.session().awaiting_command();
    record(s);
    episode_.apply(s);
    flush_notices();
    if (episode_.session().awaiting_command() != awaiting_before) {
      send_text(wire::encode(wire::mode_notice(episode_.session())));
    }
  }

  void on_text(const std::string& payload) {
    const auto msg = wire::decode(payload);
    if (!msg) {
      close("malformed_message");
      return;
    }
    if (msg->kind == wire::kToken) {
      const auto text = msg->get("text");
      if (!text) {
        close("token_without_text");
        return;
      }
      const ControlEvent ev{last_t_, event_kind_from_token(*text)};
      const auto outcome = episode_.apply(ev).value_or(EventOutcome::Repeat);
      // Tokens stopped by gating never reached the session; replay must not
      // see them either.
      if (outcome != EventOutcome::NotListening) record(ev);
      flush_notices();
      send_text(wire::encode(wire::confirmation(*text, outcome)));
      send_text(wire::encode(wire::mode_notice(episode_.session())));
    } else if (msg->kind == wire::kReset) {
      const ResetRecord r{last_t_};
      record(r);
      episode_.apply(r);
      flush_notices();
    } else {
      close("unknown_kind");
    }
  }

  void on_tick(const TickInfo& info) {
    if (info.clamped != last_clamped_ && info.clamped.any()) {
      notices_.push_back(wire::encode(wire::limit_notice(info.clamped)));
    }
    last_clamped_ = info.clamped;
    if (info.success_now) notices_.push_back(wire::encode(wire::success_notice(episode_)));
  }

  void flush_notices() {
    for (auto& n : notices_) send_text(std::move(n));
    notices_.clear();
  }

  void arm_timer() {
    timer_.expires_at(next_snapshot_);
    timer_.async_wait([self = shared_from_this()](beast::error_code ec) {
      if (ec || self->closed_) return;
      self->on_snapshot_timer();
    });
  }

  void on_snapshot_timer() {
    const auto now = Clock::now();
    const bool link_lost =
        !have_frame_ || now - last_frame_wall_ > std::chrono::milliseconds(server_.cfg.session.watchdog_ms);
    send_text(wire::encode(wire::snapshot(episode_, link_lost)));
    next_snapshot_ += kSnapshotPeriod;
    // Fell badly behind (e.g. stalled loop): resync instead of bursting.
    if (next_snapshot_ < now) next_snapshot_ = now + kSnapshotPeriod;
    arm_timer();
  }

  void send_text(std::string text) {
    if (close_sent_) return;
    outbox_.push_back(std::move(text));
    if (outbox_.size() == 1) do_write();
  }

  void do_write() {
    if (!ws_.is_open()) {
      outbox_.clear();
      return;
    }
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()),
                    [self = shared_from_this()](beast::error_code ec, std::size_t) {
                      self->on_write(ec);
                    });
  }

  void on_write(beast::error_code ec) {
    if (ec) {
      outbox_.clear();
      close();
      return;
    }
    outbox_.pop_front();
    if (!outbox_.empty()) {
      do_write();
    } else if (close_pending_) {
      finish_close();
    }
  }

  // The close frame is a write too; it goes out after the queue drains.
  void finish_close() {
    if (close_sent_ || !ws_.is_open()) return;
    close_sent_ = true;
    ws_.async_close(websocket::close_code::normal, [self = shared_from_this()](beast::error_code) {});
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  net::steady_timer timer_;
  Clock::time_point next_snapshot_;
  Server::Impl& server_;
  std::uint64_t id_;
  Episode episode_;
  StreamReader reader_;
  std::optional<std::uint32_t> t0_;
  std::uint32_t last_t_ = 0;
  Clock::time_point last_frame_wall_;
  bool have_frame_ = false;
  bool closed_ = false;
  bool close_pending_ = false;
  bool close_sent_ = false;
  ClampSet last_clamped_;
  std::vector<std::string> notices_;
  std::string trace_path_;
  std::ofstream trace_file_;
  std::unique_ptr<TraceRecorder> recorder_;
};

void Server::Impl::do_accept() {
  acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
    if (stopping) return;
    if (!ec) {
      const auto id = next_id++;
      auto session = std::make_shared<ClientSession>(std::move(socket), *this, id);
      sessions[id] = session;
      active.fetch_add(1);
      session->run();
    }
    if (acceptor.is_open()) do_accept();
  });
}

void Server::Impl::close_all() {
  stopping = true;
  beast::error_code ec;
  acceptor.close(ec);
  auto copy = sessions;
  for (auto& [id, weak] : copy) {
    if (auto s = weak.lock()) s->close("server_shutdown");
  }
}

Server::Server(ServiceConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  impl_ = std::make_unique<Impl>(cfg_, load_scenario(cfg_.scenario));
}

Server::~Server() { stop(); }

void Server::start() {
  beast::error_code ec;
  const auto address = net::ip::make_address(cfg_.listen_address, ec);
  if (ec) throw BindFailure("bad listen address '" + cfg_.listen_address + "'");
  const tcp::endpoint endpoint{address, cfg_.listen_port};
  auto& acc = impl_->acceptor;
  acc.open(endpoint.protocol(), ec);
  if (!ec) acc.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acc.bind(endpoint, ec);
  if (!ec) acc.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw BindFailure("cannot listen on " + cfg_.listen_address + ":" +
                      std::to_string(cfg_.listen_port) + ": " + ec.message());
  }
  port_ = acc.local_endpoint().port();
  impl_->do_accept();
}

void Server::run() {
  if (!impl_->signals) {
    impl_->signals.emplace(impl_->ioc, SIGINT, SIGTERM);
    impl_->signals->async_wait([this](beast::error_code ec, int) {
      if (ec) return;
      impl_->close_all();
      impl_->ioc.stop();
    });
  }
  impl_->ioc.run();
}

void Server::run_in_background() {
  start();
  thread_ = std::thread([this] { impl_->ioc.run(); });
}

void Server::stop() {
  if (!impl_) return;
  if (!impl_->ioc.stopped()) {
    net::post(impl_->ioc, [this] {
      impl_->close_all();
      impl_->ioc.stop();
    });
  }
  if (thread_.joinable()) thread_.join();
}

std::size_t Server::active_sessions() const { return impl_->active.load(); }

void Server::on_session_closed(std::function<void(const SessionSummary&)> cb) {
  impl_->on_closed = std::move(cb);
}

}  // namespace headteleop::service
