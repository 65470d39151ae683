#include <cctype>

#include "posyn/serialization.hpp"

namespace posyn {

namespace {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string nsPrefix(std::string_view metamodelName) {
  std::string out;
  for (char c : metamodelName) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(0, "mm");
  return out;
}

class XmiWriter {
 public:
  XmiWriter(const Model& model, std::string prefix) : model_(model), prefix_(std::move(prefix)) {}

  std::string namespaces() const {
    return " xmi:version=\"2.0\" xmlns:xmi=\"http://www.omg.org/XMI\""
           " xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" xmlns:" +
           prefix_ + "=\"http:///" + prefix_ + ".ecore\"";
  }

  // `tag` is the element name; `typed` adds xsi:type for contained children.
  void write(const ModelObject& obj, const std::string& tag, bool typed, const std::string& extra, int depth) {
    const MetaModel& mm = model_.metamodel();
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += indent + "<" + tag + extra;
    if (typed) out_ += " xsi:type=\"" + prefix_ + ":" + obj.className + "\"";
    out_ += " xmi:id=\"" + escape(obj.id) + "\"";
    std::vector<std::pair<std::string, const ObjectIds*>> children;
    for (const Feature& f : mm.features(obj.className)) {
      auto it = obj.slots.find(f.name());
      if (it == obj.slots.end()) continue;
      if (f.isReference()) {
        const auto& ids = std::get<ObjectIds>(it->second);
        if (f.reference().containment) {
          children.emplace_back(f.name(), &ids);
        } else if (!ids.empty()) {
          std::string joined;
          for (std::size_t i = 0; i < ids.size(); ++i) joined += (i ? " " : "") + ids[i];
          out_ += " " + f.name() + "=\"" + escape(joined) + "\"";
        }
      } else {
        out_ += " " + f.name() + "=\"" + escape(toDisplayString(it->second)) + "\"";
      }
    }
    bool any = false;
    for (const auto& [name, ids] : children) any = any || !ids->empty();
    if (!any) {
      out_ += "/>\n";
      return;
    }
    out_ += ">\n";
    for (const auto& [name, ids] : children) {
      for (const auto& id : *ids) write(model_.at(id), name, true, "", depth + 1);
    }
    out_ += indent + "</" + tag + ">\n";
  }

  std::string& out() { return out_; }

 private:
  const Model& model_;
  std::string prefix_;
  std::string out_;
};

}  // namespace

std::string exportXMI(const Model& model) {
  ConformanceReport report = checkConformance(model);
  if (!report.conforms()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::NonConformant, "model does not conform (" + std::to_string(report.violations.size()) +
                                              " violations, first: " + v.object + "." + v.feature + ": " +
                                              v.message + ")");
  }
  std::vector<const ModelObject*> roots;
  for (const auto& [id, obj] : model.objects()) {
    if (!model.containerOf(id)) roots.push_back(&obj);
  }
  XmiWriter w(model, nsPrefix(model.metamodel().name()));
  w.out() = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  const std::string prefix = nsPrefix(model.metamodel().name());
  if (roots.size() == 1) {
    w.write(*roots.front(), prefix + ":" + roots.front()->className, false, w.namespaces(), 0);
  } else if (roots.empty()) {
    w.out() += "<xmi:XMI" + w.namespaces() + "/>\n";
  } else {
    w.out() += "<xmi:XMI" + w.namespaces() + ">\n";
    for (const ModelObject* r : roots) w.write(*r, prefix + ":" + r->className, false, "", 1);
    w.out() += "</xmi:XMI>\n";
  }
  return std::move(w.out());
}

}  // namespace posyn
