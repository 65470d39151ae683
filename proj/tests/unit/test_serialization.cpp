#include <fstream>
#include <random>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "fixture.hpp"
#include "oracles.hpp"
#include "posyn/serialization.hpp"
#include "posyn/session.hpp"
#include "test_util.hpp"

using namespace posyn;
namespace pt = boost::property_tree;

namespace {

std::string readFile(const std::string& name) {
  std::ifstream in(std::string(POSYN_DATA_DIR) + "/" + name, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replaced(std::string text, std::string_view from, std::string_view to) {
  auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  if (at != std::string::npos) text.replace(at, from.size(), to);
  return text;
}

pt::ptree parseXml(const std::string& xml) {
  std::istringstream in(xml);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

/// Network metamodel with a non-containment reference for cross-ref checks.
Model network() {
  MetaModelSpec spec;
  spec.name = "Net";
  MetaClassDef root{"Root", false, {}, {}, {}};
  root.references.push_back({"nodes", "Node", true, 0, kUnbounded});
  MetaClassDef node{"Node", false, {}, {}, {}};
  node.attributes.push_back({"label", PrimitiveType::String, {}, {}, {}});
  node.references.push_back({"next", "Node", false, 0, 1});
  spec.classes = {root, node};
  auto mm = std::make_shared<const MetaModel>(defineMetamodel(spec));
  Model m("net", mm);
  ObjectId r = instantiate(m, "Root");
  ObjectId a = instantiate(m, "Node", ContainerRef{r, "nodes"});
  ObjectId b = instantiate(m, "Node", ContainerRef{r, "nodes"});
  writeSlot(m, a, "label", std::string("<a & \"b\">"));
  writeSlot(m, a, "next", ObjectIds{b});
  return m;
}

}  // namespace

TEST(ProjectDocument, GoldenFixtureMatches) {
  EXPECT_EQ(saveProject(fixture::aircraft()), readFile("aircraft.posyn.json"));
  EXPECT_EQ(loadProject(readFile("aircraft.posyn.json")), fixture::aircraft());
}

TEST(ProjectDocument, RandomProjectsRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    Project p = oracle::randomProject(rng);
    const std::string text = saveProject(p);
    ASSERT_EQ(text, saveProject(p)) << i;
    Project q = loadProject(text);
    ASSERT_EQ(q, p) << i << "\n" << text;
    ASSERT_EQ(saveProject(q), text) << i;
  }
}

TEST(ProjectDocument, LoadErrors) {
  const std::string golden = readFile("aircraft.posyn.json");
  EXPECT_POSYN_ERROR(loadProject("{ not json"), ErrorCode::ParseError);
  EXPECT_POSYN_ERROR(loadProject(replaced(golden, "\"formatVersion\": 1", "\"formatVersion\": 99")),
                     ErrorCode::VersionMismatch);
  try {
    loadProject(replaced(golden, "2 * this.model.getChildren('seats').getValue()", "2 * * 3"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationFailed);
    ASSERT_FALSE(e.issues().empty());
    EXPECT_EQ(e.issues()[0].code, ErrorCode::SyntaxError);
    EXPECT_EQ(e.issues()[0].where, "seats-x");
    EXPECT_NE(e.issues()[0].message.find("at position"), std::string::npos);
  }
  auto codes = test::issueCodes([&] { loadProject(replaced(golden, "\"seats\": 150", "\"seats\": \"many\"")); });
  EXPECT_TRUE(test::contains(codes, ErrorCode::TypeMismatch));
}

TEST(Xmi, AircraftStructure) {
  const std::string xml = exportXMI(fixture::aircraft().model);
  EXPECT_EQ(xml, exportXMI(fixture::aircraft().model));
  pt::ptree tree = parseXml(xml);
  ASSERT_EQ(tree.size(), 1u);
  EXPECT_EQ(tree.front().first, "aircraft:Hangar");
  const pt::ptree& hangar = tree.front().second;
  EXPECT_EQ(hangar.get<std::string>("<xmlattr>.name"), "ROMAFIU1234");
  EXPECT_EQ(hangar.get<std::string>("<xmlattr>.xmi:id"), fixture::kHangar);
  int planes = 0;
  for (const auto& [tag, child] : hangar) {
    if (tag != "airplanes") continue;
    ++planes;
    EXPECT_FALSE(child.get<std::string>("<xmlattr>.xsi:type").empty());
  }
  EXPECT_EQ(planes, 3);
  EXPECT_EQ(hangar.count("airplanes"), 3u);
}

TEST(Xmi, CrossReferencesAndEscaping) {
  Model m = network();
  pt::ptree tree = parseXml(exportXMI(m));
  const pt::ptree& root = tree.get_child("net:Root");
  std::vector<const pt::ptree*> nodes;
  for (const auto& [tag, child] : root) {
    if (tag == "nodes") nodes.push_back(&child);
  }
  ASSERT_EQ(nodes.size(), 2u);
  EXPECT_EQ(nodes[0]->get<std::string>("<xmlattr>.label"), "<a & \"b\">");
  EXPECT_EQ(nodes[0]->get<std::string>("<xmlattr>.next"), nodes[1]->get<std::string>("<xmlattr>.xmi:id"));
  EXPECT_EQ(nodes[0]->get<std::string>("<xmlattr>.xsi:type"), "net:Node");
}

TEST(Xmi, EmptyAndMultiRootModels) {
  Model empty("e", fixture::aircraft().metamodel);
  pt::ptree tree = parseXml(exportXMI(empty));
  ASSERT_EQ(tree.size(), 1u);
  EXPECT_EQ(tree.front().first, "xmi:XMI");

  Model two = empty;
  instantiate(two, "Hangar");
  instantiate(two, "Glider");
  tree = parseXml(exportXMI(two));
  EXPECT_EQ(tree.get_child("xmi:XMI").count("aircraft:Hangar"), 1u);
  EXPECT_EQ(tree.get_child("xmi:XMI").count("aircraft:Glider"), 1u);
}

TEST(Xmi, NonConformantModelIsRefused) {
  Model m = network();
  ModelObject root = m.objects().begin()->second;
  root.slots["nodes"] = ObjectIds{"o404"};
  m.eraseRaw(root.id);
  m.insertRaw(root);
  EXPECT_POSYN_ERROR(exportXMI(m), ErrorCode::NonConformant);
}

TEST(Events, JsonRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    SessionEvent e;
    e.seq = static_cast<std::int64_t>(rng() % 1000) + 1;
    e.kind = static_cast<EventKind>(rng() % 14);
    e.elementId = "o" + std::to_string(rng() % 30);
    if (rng() % 2) e.payload.x = static_cast<double>(rng() % 10000) / 7.0;
    if (rng() % 2) e.payload.y = -static_cast<double>(rng() % 10000) / 3.0;
    if (rng() % 3 == 0) e.payload.width = 0.1;
    if (rng() % 3 == 0) e.payload.height = 1e-9;
    if (rng() % 3 == 0) e.payload.rotation = 359.5;
    if (rng() % 3 == 0) e.payload.handle = kAllHandles[rng() % 8];
    if (rng() % 3 == 0) e.payload.anchor = static_cast<Anchor>(rng() % 3);
    if (rng() % 2) e.payload.className = "Glider";
    if (rng() % 3 == 0) e.payload.container = ContainerRef{"o1", "airplanes"};
    if (rng() % 2) e.payload.feature = "seats";
    switch (rng() % 6) {
      case 0: e.payload.value = std::int64_t{-3}; break;
      case 1: e.payload.value = 0.25; break;
      case 2: e.payload.value = std::string("x\"y"); break;
      case 3: e.payload.value = true; break;
      case 4: e.payload.value = ObjectIds{"o2", "o3"}; break;
      default: break;
    }
    if (rng() % 3 == 0) e.payload.target = "o9";
    if (rng() % 3 == 0) e.payload.view = "positional";
    const std::string text = eventToJson(e);
    ASSERT_EQ(text.find('\n'), std::string::npos);
    ASSERT_EQ(parseEvent(text), e) << text;
  }
}

TEST(Events, ScriptFiles) {
  auto events = parseScript(readFile("snap.jsonl"));
  EXPECT_EQ(events, fixture::snapScript());
  EXPECT_EQ(scriptToJsonl(events), readFile("snap.jsonl"));
  EXPECT_TRUE(parseScript(readFile("empty.jsonl")).empty());
  EXPECT_EQ(parseScript("\n" + scriptToJsonl(events) + "\n\n"), events);
}

TEST(Events, ScriptErrors) {
  auto events = fixture::snapScript();
  events[2].seq = 7;
  EXPECT_POSYN_ERROR(parseScript(scriptToJsonl(events)), ErrorCode::ValidationFailed);
  try {
    parseScript("{\"seq\":1,\"kind\":\"dragStart\",\"elementId\":\"o2\",\"payload\":{}}\n{oops\n");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_POSYN_ERROR(parseEvent("{\"seq\":1,\"kind\":\"teleport\",\"elementId\":\"o2\",\"payload\":{}}"),
                     ErrorCode::ParseError);
}

TEST(Trace, OutcomeLinesAreSingleLineJson) {
  auto r = replay(fixture::aircraft(), fixture::snapScript());
  for (const auto& o : r.trace) {
    const std::string line = outcomeToJson(o);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(line.front(), '{');
  }
}
