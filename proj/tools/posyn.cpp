// posyn: replay scripted sessions, validate and export projects, serve a session.
//
// Exit codes: 0 success, 1 load/validation/IO error, 2 replay produced violations.

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "posyn/serialization.hpp"
#include "posyn/session.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolations = 2;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path + "'");
}

void reportError(const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  if (const auto* v = dynamic_cast<const posyn::ValidationError*>(&e)) {
    for (const auto& issue : v->issues()) {
      std::cerr << "  " << posyn::toString(issue.code) << " at " << issue.where << ": " << issue.message << "\n";
    }
  }
}

int runReplay(const std::string& projectPath, const std::string& scriptPath, const std::string& outPath,
              const std::string& tracePath) {
  posyn::ReplayResult result;
  try {
    posyn::Project project = posyn::loadProject(readFile(projectPath));
    auto events = posyn::parseScript(readFile(scriptPath));
    result = posyn::replay(std::move(project), events);
  } catch (const std::exception& e) {
    reportError(e);
    return kExitError;
  }
  try {
    if (!tracePath.empty()) {
      std::string trace;
      for (const auto& o : result.trace) trace += posyn::outcomeToJson(o) + "\n";
      writeFile(tracePath, trace);
    }
    if (!outPath.empty()) writeFile(outPath, posyn::saveProject(result.finalState));
  } catch (const std::exception& e) {
    reportError(e);
    return kExitError;
  }
  for (const auto& o : result.trace) {
    for (const auto& v : o.violations) {
      std::cerr << "seq " << o.seq << ": " << posyn::toString(v.code) << " rule " << v.rule << " element "
                << v.element << ": " << v.message << "\n";
    }
  }
  std::cout << result.trace.size() << " events, " << result.violations << " violations\n";
  return result.violations == 0 ? kExitOk : kExitViolations;
}

int runValidate(const std::string& projectPath) {
  try {
    posyn::Project project = posyn::loadProject(readFile(projectPath));
    std::cout << "ok: " << project.model.objects().size() << " objects, " << project.views.size() << " views\n";
    return kExitOk;
  } catch (const std::exception& e) {
    reportError(e);
    return kExitError;
  }
}

int runExport(const std::string& projectPath, const std::string& outPath) {
  try {
    posyn::Project project = posyn::loadProject(readFile(projectPath));
    writeFile(outPath, posyn::exportXMI(project.model));
    return kExitOk;
  } catch (const std::exception& e) {
    reportError(e);
    return kExitError;
  }
}

volatile std::sig_atomic_t gStop = 0;

int runServe(const std::string& projectPath, std::uint16_t port, const std::string& host) {
  try {
    auto session = std::make_shared<posyn::Session>("s1", posyn::loadProject(readFile(projectPath)));
    posyn::Server server(session, port, host);
    server.start();
    std::cout << "listening on " << host << ":" << server.port() << std::endl;
    std::signal(SIGINT, [](int) { gStop = 1; });
    std::signal(SIGTERM, [](int) { gStop = 1; });
    while (!gStop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return kExitOk;
  } catch (const std::exception& e) {
    reportError(e);
    return kExitError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posyn: positional-syntax model editor engine"};
  app.require_subcommand(1);

  std::string project, script, out, trace, format = "xmi", host = "127.0.0.1";
  std::uint16_t port = 0;

  auto* replay = app.add_subcommand("replay", "Apply a JSONL event script to a project");
  replay->add_option("--project", project, "Project file (.posyn.json)")->required()->check(CLI::ExistingFile);
  replay->add_option("--script", script, "Event script (JSONL)")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", out, "Write the final project here");
  replay->add_option("--trace", trace, "Write one outcome per event here (JSONL)");

  auto* validate = app.add_subcommand("validate", "Load and validate a project");
  validate->add_option("--project", project, "Project file")->required()->check(CLI::ExistingFile);

  auto* exportCmd = app.add_subcommand("export", "Export the model");
  exportCmd->add_option("--project", project, "Project file")->required()->check(CLI::ExistingFile);
  exportCmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"xmi"}));
  exportCmd->add_option("--out", out, "Output file")->required();

  auto* serve = app.add_subcommand("serve", "Serve one session over TCP");
  serve->add_option("--project", project, "Project file")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", port, "TCP port, 0 picks a free one")->required();
  serve->add_option("--host", host, "Bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  if (*replay) return runReplay(project, script, out, trace);
  if (*validate) return runValidate(project);
  if (*exportCmd) return runExport(project, out);
  return runServe(project, port, host);
}
