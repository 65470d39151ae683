#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "posyn/engine.hpp"

namespace posyn {

// Protocol ---------------------------------------------------------------------
//
// Every message is a JSON object {"kind", "sessionId", "payload"}.
//   client -> server
//     hello        payload: {"client": name}                 reply: hello
//     loadProject  payload: {"project": <project document>}  broadcast: state
//     event        payload: <session event>                  broadcast: delta, violation*
//     state        (no payload)                              reply: state
//     bye          (no payload)                              reply: bye, then close
//   server -> client
//     hello        payload: {"protocol": 1, "lastSeq": n}
//     state        payload: {"project": <document>, "lastSeq": n}
//     delta        payload: <event outcome>
//     violation    payload: {"seq", "code", "rule", "element", "message"}
//     bye
// An event whose seq is 0 is numbered by the session. Malformed input gets a
// violation reply with code MalformedMessage to the sender only.

inline constexpr int kProtocolVersion = 1;

using ClientId = std::uint64_t;
using MessageSink = std::function<void(const std::string&)>;

/// One authoritative engine shared by any number of clients. Thread-safe:
/// messages are handled one at a time and broadcasts reach every subscriber
/// in application order.
class Session {
 public:
  Session(std::string id, Project project);

  const std::string& id() const { return id_; }

  ClientId subscribe(MessageSink sink);
  void unsubscribe(ClientId client);

  /// Handles one message from `from`; replies and broadcasts go through sinks.
  /// Returns true when the sender asked to close (bye).
  bool handle(ClientId from, std::string_view message);

  /// Handles one message for an unsubscribed caller and returns what that
  /// caller would receive, broadcasts included.
  std::vector<std::string> handle(std::string_view message);

  /// Canonical project document of the current state.
  std::string saveProject() const;
  std::int64_t lastSeq() const;

 private:
  struct Outgoing {
    bool broadcast;
    std::string message;
  };
  bool handleLocked(std::string_view message, std::vector<Outgoing>& out);

  std::string id_;
  mutable std::mutex mutex_;
  std::unique_ptr<Engine> engine_;
  std::map<ClientId, MessageSink> sinks_;
  ClientId nextClient_ = 1;
};

/// Offline replay: one engine, events applied in order.
struct ReplayResult {
  Project finalState;
  std::vector<EventOutcome> trace;
  std::size_t violations = 0;
};

/// Throws ValidationError when the project does not validate.
ReplayResult replay(Project project, std::span<const SessionEvent> events);

// Framing: 4-byte big-endian length, then that many bytes of UTF-8 JSON.

inline constexpr std::size_t kMaxFrameSize = 16u << 20;

std::string frame(std::string_view message);

class FrameDecoder {
 public:
  void feed(std::string_view bytes);
  /// Next complete message. Throws MalformedMessage when a header announces
  /// more than kMaxFrameSize bytes; the stream cannot be resynchronized then.
  std::optional<std::string> next();

 private:
  std::string buffer_;
};

/// TCP endpoint for one session. Each connection gets a reader thread.
class Server {
 public:
  /// Port 0 picks a free port.
  Server(std::shared_ptr<Session> session, std::uint16_t port, std::string host = "127.0.0.1");
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts accepting. Throws std::system_error (e.g. port in use).
  void start();
  void stop();
  std::uint16_t port() const { return port_; }

 private:
  struct Connection;
  void acceptLoop();
  void serve(const std::shared_ptr<Connection>& conn);

  std::shared_ptr<Session> session_;
  std::uint16_t port_;
  std::string host_;
  int listenFd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptThread_;
  std::mutex connMutex_;
  std::vector<std::shared_ptr<Connection>> connections_;
};

/// Blocking framed-JSON client, used by tests and tools.
class Client {
 public:
  Client() = default;
  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  /// Throws std::system_error when the connection fails.
  void connect(const std::string& host, std::uint16_t port);
  void send(std::string_view message);
  /// Nullopt on timeout or when the server closed the connection.
  std::optional<std::string> receive(int timeoutMs = 5000);
  void close();

 private:
  int fd_ = -1;
  FrameDecoder decoder_;
};

}  // namespace posyn
