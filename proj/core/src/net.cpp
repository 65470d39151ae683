#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <system_error>

#include "posyn/session.hpp"

namespace posyn {

namespace {

[[noreturn]] void sysFail(const std::string& what) { throw std::system_error(errno, std::generic_category(), what); }

bool sendAll(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

sockaddr_in address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw std::system_error(EINVAL, std::generic_category(), "bad IPv4 address '" + host + "'");
  }
  return addr;
}

}  // namespace

struct Server::Connection {
  int fd = -1;
  std::mutex writeMutex;
  std::thread reader;
  std::atomic<bool> open{true};

  void write(const std::string& message) {
    std::lock_guard lock(writeMutex);
    if (open && !sendAll(fd, frame(message))) open = false;
  }
};

Server::Server(std::shared_ptr<Session> session, std::uint16_t port, std::string host)
    : session_(std::move(session)), port_(port), host_(std::move(host)) {}

Server::~Server() { stop(); }

void Server::start() {
  listenFd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listenFd_ < 0) sysFail("socket");
  int yes = 1;
  ::setsockopt(listenFd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr = address(host_, port_);
  if (::bind(listenFd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    int err = errno;
    ::close(listenFd_);
    listenFd_ = -1;
    throw std::system_error(err, std::generic_category(), "bind " + host_ + ":" + std::to_string(port_));
  }
  if (::listen(listenFd_, 16) < 0) sysFail("listen");
  socklen_t len = sizeof addr;
  ::getsockname(listenFd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  running_ = true;
  acceptThread_ = std::thread([this] { acceptLoop(); });
}

void Server::acceptLoop() {
  while (running_) {
    pollfd pfd{listenFd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 100);
    if (ready <= 0) continue;
    int fd = ::accept(listenFd_, nullptr, nullptr);
    if (fd < 0) continue;
    int yes = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
    auto conn = std::make_shared<Connection>();
    conn->fd = fd;
    std::lock_guard lock(connMutex_);
    connections_.push_back(conn);
    conn->reader = std::thread([this, conn] { serve(conn); });
  }
}

void Server::serve(const std::shared_ptr<Connection>& conn) {
  ClientId client = session_->subscribe([conn](const std::string& m) { conn->write(m); });
  FrameDecoder decoder;
  char buf[8192];
  bool closing = false;
  while (!closing && conn->open && running_) {
    pollfd pfd{conn->fd, POLLIN, 0};
    int ready = ::poll(&pfd, 1, 100);
    if (ready == 0) continue;
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    ssize_t n = ::recv(conn->fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    decoder.feed(std::string_view(buf, static_cast<std::size_t>(n)));
    try {
      while (auto msg = decoder.next()) {
        if (session_->handle(client, *msg)) {
          closing = true;
          break;
        }
      }
    } catch (const Error&) {
      conn->write(std::string("{\"kind\":\"violation\",\"payload\":{\"code\":\"MalformedMessage\",\"element\":\"\","
                              "\"message\":\"oversized frame\",\"rule\":\"-\",\"seq\":0},\"sessionId\":\"") +
                  session_->id() + "\"}");
      break;
    }
  }
  session_->unsubscribe(client);
  conn->open = false;
  ::shutdown(conn->fd, SHUT_RDWR);
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  if (acceptThread_.joinable()) acceptThread_.join();
  ::close(listenFd_);
  listenFd_ = -1;
  std::vector<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard lock(connMutex_);
    conns.swap(connections_);
  }
  for (auto& c : conns) {
    ::shutdown(c->fd, SHUT_RDWR);
    if (c->reader.joinable()) c->reader.join();
    ::close(c->fd);
  }
}

Client::~Client() { close(); }

void Client::connect(const std::string& host, std::uint16_t port) {
  close();
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) sysFail("socket");
  sockaddr_in addr = address(host, port);
  if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    int err = errno;
    ::close(fd_);
    fd_ = -1;
    throw std::system_error(err, std::generic_category(), "connect " + host + ":" + std::to_string(port));
  }
  int yes = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &yes, sizeof yes);
}

void Client::send(std::string_view message) {
  if (fd_ < 0 || !sendAll(fd_, frame(message))) {
    throw std::system_error(ENOTCONN, std::generic_category(), "send");
  }
}

std::optional<std::string> Client::receive(int timeoutMs) {
  if (auto msg = decoder_.next()) return msg;
  if (fd_ < 0) return std::nullopt;
  char buf[8192];
  while (true) {
    pollfd pfd{fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, timeoutMs);
    if (ready <= 0) return std::nullopt;
    ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
    if (n <= 0) return std::nullopt;
    decoder_.feed(std::string_view(buf, static_cast<std::size_t>(n)));
    if (auto msg = decoder_.next()) return msg;
  }
}

void Client::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  decoder_ = FrameDecoder();
}

}  // namespace posyn
