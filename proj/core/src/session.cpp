#include "posyn/session.hpp"

#include "json_codec.hpp"
#include "posyn/serialization.hpp"

namespace posyn {

using codec::json;

Session::Session(std::string id, Project project)
    : id_(std::move(id)), engine_(std::make_unique<Engine>(std::move(project))) {}

ClientId Session::subscribe(MessageSink sink) {
  std::lock_guard lock(mutex_);
  ClientId id = nextClient_++;
  sinks_.emplace(id, std::move(sink));
  return id;
}

void Session::unsubscribe(ClientId client) {
  std::lock_guard lock(mutex_);
  sinks_.erase(client);
}

std::string Session::saveProject() const {
  std::lock_guard lock(mutex_);
  return posyn::saveProject(engine_->project());
}

std::int64_t Session::lastSeq() const {
  std::lock_guard lock(mutex_);
  return engine_->lastSeq();
}

namespace {

json violationPayload(std::int64_t seq, const Violation& v) {
  return {{"seq", seq}, {"code", toString(v.code)}, {"rule", v.rule}, {"element", v.element}, {"message", v.message}};
}

json malformed(const std::string& message) {
  return violationPayload(0, {ErrorCode::MalformedMessage, "-", "", message});
}

}  // namespace

bool Session::handleLocked(std::string_view message, std::vector<Outgoing>& out) {
  auto send = [&](bool broadcast, std::string_view kind, const json& payload) {
    json j{{"kind", kind}, {"sessionId", id_}, {"payload", payload}};
    out.push_back({broadcast, j.dump()});
  };
  json msg;
  try {
    msg = json::parse(message);
  } catch (const json::exception& e) {
    send(false, "violation", malformed(std::string("invalid JSON: ") + e.what()));
    return false;
  }
  if (!msg.is_object() || !msg.contains("kind") || !msg["kind"].is_string()) {
    send(false, "violation", malformed("message needs a string 'kind'"));
    return false;
  }
  const std::string kind = msg["kind"].get<std::string>();
  const json payload = msg.contains("payload") ? msg["payload"] : json::object();

  if (kind == "hello") {
    send(false, "hello", {{"protocol", kProtocolVersion}, {"lastSeq", engine_->lastSeq()}});
    return false;
  }
  if (kind == "bye") {
    send(false, "bye", json::object());
    return true;
  }
  if (kind == "state") {
    send(false, "state", {{"project", codec::toJson(engine_->project())}, {"lastSeq", engine_->lastSeq()}});
    return false;
  }
  if (kind == "loadProject") {
    try {
      if (!payload.is_object() || !payload.contains("project")) throw Error(ErrorCode::ParseError, "missing 'project'");
      const json& doc = payload["project"];
      Project p = doc.is_string() ? loadProject(doc.get<std::string>()) : codec::projectFromJson(doc);
      engine_ = std::make_unique<Engine>(std::move(p));
    } catch (const std::exception& e) {
      const auto* err = dynamic_cast<const Error*>(&e);
      send(false, "violation",
           violationPayload(0, {err ? err->code() : ErrorCode::MalformedMessage, "-", "", e.what()}));
      return false;
    }
    send(true, "state", {{"project", codec::toJson(engine_->project())}, {"lastSeq", engine_->lastSeq()}});
    return false;
  }
  if (kind == "event") {
    SessionEvent event;
    try {
      event = codec::eventFromJson(payload);
    } catch (const std::exception& e) {
      send(false, "violation", malformed(std::string("bad event: ") + e.what()));
      return false;
    }
    if (event.seq == 0) event.seq = engine_->lastSeq() + 1;
    EventOutcome outcome = engine_->apply(event);
    if (outcome.accepted) send(true, "delta", codec::toJson(outcome));
    for (const auto& v : outcome.violations) send(true, "violation", violationPayload(outcome.seq, v));
    return false;
  }
  send(false, "violation", malformed("unknown message kind '" + kind + "'"));
  return false;
}

bool Session::handle(ClientId from, std::string_view message) {
  std::lock_guard lock(mutex_);
  std::vector<Outgoing> out;
  bool close = handleLocked(message, out);
  for (const auto& o : out) {
    if (o.broadcast) {
      for (const auto& [id, sink] : sinks_) sink(o.message);
    } else if (auto it = sinks_.find(from); it != sinks_.end()) {
      it->second(o.message);
    }
  }
  return close;
}

std::vector<std::string> Session::handle(std::string_view message) {
  std::lock_guard lock(mutex_);
  std::vector<Outgoing> out;
  handleLocked(message, out);
  std::vector<std::string> mine;
  for (auto& o : out) {
    if (o.broadcast) {
      for (const auto& [id, sink] : sinks_) sink(o.message);
    }
    mine.push_back(std::move(o.message));
  }
  return mine;
}

ReplayResult replay(Project project, std::span<const SessionEvent> events) {
  Engine engine(std::move(project));
  ReplayResult result;
  for (const auto& e : events) {
    result.trace.push_back(engine.apply(e));
    result.violations += result.trace.back().violations.size();
  }
  result.finalState = engine.project();
  return result;
}

// Framing ------------------------------------------------------------------------

std::string frame(std::string_view message) {
  const auto n = static_cast<std::uint32_t>(message.size());
  std::string out;
  out.reserve(4 + message.size());
  out += static_cast<char>((n >> 24) & 0xFF);
  out += static_cast<char>((n >> 16) & 0xFF);
  out += static_cast<char>((n >> 8) & 0xFF);
  out += static_cast<char>(n & 0xFF);
  out.append(message);
  return out;
}

void FrameDecoder::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<std::string> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<unsigned char>(buffer_[static_cast<std::size_t>(i)]);
  if (n > kMaxFrameSize) {
    throw Error(ErrorCode::MalformedMessage, "frame of " + std::to_string(n) + " bytes exceeds the limit");
  }
  if (buffer_.size() < 4 + static_cast<std::size_t>(n)) return std::nullopt;
  std::string msg = buffer_.substr(4, n);
  buffer_.erase(0, 4 + static_cast<std::size_t>(n));
  return msg;
}

}  // namespace posyn
