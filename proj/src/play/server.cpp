#include <poll.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <thread>

#include "hasard/play/session.hpp"

namespace hasard::play {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

class Connection {
public:
  virtual ~Connection() = default;
  /// Blocks for the next client line; false once the peer is gone.
  virtual bool read_line(std::string& line) = 0;
  virtual void send_frame(const std::vector<std::uint8_t>& message) = 0;
  virtual void send_state(const StateMessage& state) = 0;
  virtual void close() = 0;
};

class RawConnection final : public Connection {
public:
  explicit RawConnection(tcp::socket socket) : socket_(std::move(socket)) {}

  bool read_line(std::string& line) override {
    boost::system::error_code ec;
    const std::size_t n = asio::read_until(socket_, buf_, '\n', ec);
    if (ec) return false;
    std::istream in(&buf_);
    std::getline(in, line);
    (void)n;
    return true;
  }
  void send_frame(const std::vector<std::uint8_t>& message) override { write(message); }
  void send_state(const StateMessage& state) override { write(encode_state(state)); }
  void close() override {
    boost::system::error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
  }

private:
  void write(const std::vector<std::uint8_t>& bytes) {
    std::lock_guard lock(write_mu_);
    boost::system::error_code ec;
    asio::write(socket_, asio::buffer(bytes), ec);
  }

  tcp::socket socket_;
  asio::streambuf buf_;
  std::mutex write_mu_;
};

class WsConnection final : public Connection {
public:
  WsConnection(tcp::socket socket, beast::flat_buffer& buffer) : ws_(std::move(socket)) {
    beast::http::request<beast::http::string_body> req;
    beast::http::read(ws_.next_layer(), buffer, req);
    if (!websocket::is_upgrade(req)) throw std::runtime_error("HTTP request is not a WebSocket upgrade");
    ws_.accept(req);
  }

  bool read_line(std::string& line) override {
    if (!pending_.empty()) return pop(line);
    beast::flat_buffer buf;
    boost::system::error_code ec;
    ws_.read(buf, ec);
    if (ec) return false;
    pending_ = beast::buffers_to_string(buf.data());
    if (pending_.empty() || pending_.back() != '\n') pending_ += '\n';
    return pop(line);
  }
  void send_frame(const std::vector<std::uint8_t>& message) override {
    std::lock_guard lock(write_mu_);
    boost::system::error_code ec;
    ws_.binary(true);
    ws_.write(asio::buffer(message), ec);
  }
  void send_state(const StateMessage& state) override {
    const std::string line = state_line(state);
    std::lock_guard lock(write_mu_);
    boost::system::error_code ec;
    ws_.text(true);
    ws_.write(asio::buffer(line), ec);
  }
  void close() override {
    boost::system::error_code ec;
    ws_.next_layer().shutdown(tcp::socket::shutdown_both, ec);
  }

private:
  bool pop(std::string& line) {
    const auto nl = pending_.find('\n');
    line = pending_.substr(0, nl);
    pending_.erase(0, nl + 1);
    return true;
  }

  websocket::stream<tcp::socket> ws_;
  std::string pending_;
  std::mutex write_mu_;
};

// A browser opens with "GET "; anything else (or silence) is the raw transport.
std::unique_ptr<Connection> open_connection(tcp::socket socket) {
  pollfd pfd{socket.native_handle(), POLLIN, 0};
  char peek[4] = {};
  std::size_t got = 0;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(250);
  while (got < sizeof peek && std::chrono::steady_clock::now() < deadline) {
    if (::poll(&pfd, 1, 20) > 0) {
      boost::system::error_code ec;
      got = socket.receive(asio::buffer(peek), tcp::socket::message_peek, ec);
      if (ec || got == 0) break;
      if (got < sizeof peek) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  if (got == sizeof peek && std::string_view(peek, 4) == "GET ") {
    beast::flat_buffer buffer;
    return std::make_unique<WsConnection>(std::move(socket), buffer);
  }
  return std::make_unique<RawConnection>(std::move(socket));
}

struct Inbox {
  std::mutex mu;
  std::condition_variable cv;
  int step_tokens = 0;
  bool reset = false;
  bool gone = false;
};

}  // namespace

void serve(Session& session, const ServerOptions& options) {
  asio::io_context io;
  tcp::acceptor acceptor(io, tcp::endpoint(tcp::v4(), static_cast<unsigned short>(options.port)));
  if (options.on_listen) options.on_listen(acceptor.local_endpoint().port());
  tcp::socket socket(io);
  acceptor.accept(socket);
  socket.set_option(tcp::no_delay(true));
  auto conn = open_connection(std::move(socket));

  Inbox inbox;
  std::thread reader([&] {
    std::string line;
    while (conn->read_line(line)) {
      const auto msg = parse_client_line(line);
      if (!msg) continue;
      if (const auto* k = std::get_if<KeysCommand>(&*msg)) {
        session.set_keys(k->mask);
        continue;
      }
      std::lock_guard lock(inbox.mu);
      if (std::holds_alternative<ResetCommand>(*msg)) inbox.reset = true;
      else ++inbox.step_tokens;
      inbox.cv.notify_all();
    }
    std::lock_guard lock(inbox.mu);
    inbox.gone = true;
    inbox.cv.notify_all();
  });

  auto send = [&](const Update& u) {
    if (u.frame) conn->send_frame(encode_frame(u.seq, u.frame->width, u.frame->height, u.frame->rgb));
    conn->send_state(u.state);
  };

  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(options.step_seconds));
  send(session.begin_episode());
  auto next_tick = clock::now() + period;
  for (;;) {
    bool late = false;
    {
      std::unique_lock lock(inbox.mu);
      if (options.lockstep) {
        inbox.cv.wait(lock, [&] { return inbox.step_tokens > 0 || inbox.reset || inbox.gone; });
      } else {
        inbox.cv.wait_until(lock, next_tick, [&] { return inbox.reset || inbox.gone; });
      }
      if (inbox.gone) break;
      if (inbox.reset) {
        inbox.reset = false;
        lock.unlock();
        send(session.begin_episode());
        next_tick = clock::now() + period;
        continue;
      }
      if (options.lockstep) --inbox.step_tokens;
    }
    if (!options.lockstep) {
      late = clock::now() > next_tick + period;
      next_tick += period;
      if (late) next_tick = clock::now() + period;
    }
    const Update u = session.step(!late);
    send(u);
    if (!u.state.done) continue;
    if (options.max_episodes > 0 && static_cast<int>(session.completed().size()) >= options.max_episodes) break;
    std::unique_lock lock(inbox.mu);
    inbox.cv.wait(lock, [&] { return inbox.reset || inbox.gone; });
    if (inbox.gone) break;
    inbox.reset = false;
    lock.unlock();
    send(session.begin_episode());
    next_tick = clock::now() + period;
  }
  session.abort();
  conn->close();
  reader.join();
}

}  // namespace hasard::play
