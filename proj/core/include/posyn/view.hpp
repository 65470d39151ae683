#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posyn/model.hpp"
#include "posyn/rules.hpp"

namespace posyn {

enum class Handle { N, S, E, W, NE, NW, SE, SW };

inline constexpr std::array<Handle, 8> kAllHandles = {Handle::N,  Handle::S,  Handle::E,  Handle::W,
                                                      Handle::NE, Handle::NW, Handle::SE, Handle::SW};

std::string_view toString(Handle handle);
std::optional<Handle> handleFromString(std::string_view text);

/// Interaction capabilities. Non-measurable implies every flag is off.
struct Measurability {
  bool measurable = false;
  bool draggable = false;
  std::set<Handle> resizeHandles;
  bool rotatable = false;

  /// Clears the flags of a non-measurable element.
  Measurability normalized() const;
  bool operator==(const Measurability&) const = default;
};

struct ElementSelector {
  enum class Kind { Personal, Metaclass, ViewDefault };
  Kind kind = Kind::ViewDefault;
  std::string name;  // object id (Personal) or class name (Metaclass)

  static ElementSelector personal(ObjectId id) { return {Kind::Personal, std::move(id)}; }
  static ElementSelector metaclass(std::string cls) { return {Kind::Metaclass, std::move(cls)}; }
  static ElementSelector viewDefault() { return {Kind::ViewDefault, {}}; }

  auto operator<=>(const ElementSelector&) const = default;
};

std::string_view toString(ElementSelector::Kind kind);
std::optional<ElementSelector::Kind> selectorKindFromString(std::string_view text);

struct ViewRule {
  std::string id;
  ElementSelector selector;
  std::string templ;  // markup with $##feature$ placeholders
  Measurability measurable;
  std::vector<RuleTriple> triples;

  bool operator==(const ViewRule&) const = default;
};

enum class UnmappedPolicy { Exclude, FreeForm, Custom };

std::string_view toString(UnmappedPolicy policy);
std::optional<UnmappedPolicy> unmappedPolicyFromString(std::string_view text);

struct View {
  std::string name;
  bool active = false;
  std::int64_t stackRank = 0;  // higher wins among active views
  std::optional<ViewRule> defaultRule;
  std::vector<ViewRule> rules;
  UnmappedPolicy unmappedPolicy = UnmappedPolicy::FreeForm;

  bool operator==(const View&) const = default;
};

/// Highest priority first.
enum class Tier { Personal, Inherited, ViewDefault, GlobalDefault };

std::string_view toString(Tier tier);

/// The immutable fallback rule that belongs to no view.
const ViewRule& globalDefaultRule();
inline constexpr std::string_view kGlobalDefaultId = "global-default";

struct StyleCandidate {
  Tier tier = Tier::GlobalDefault;
  int classDistance = 0;  // Inherited only
  std::int64_t stackRank = 0;
  std::size_t viewIndex = 0;  // position in the view list
  std::size_t ruleIndex = 0;  // position in the view; the default rule comes last
  std::string view;           // empty for the global default
  std::string ruleId;

  bool operator==(const StyleCandidate&) const = default;
};

/// Strict total order: tier, then nearest class (Inherited), then stackRank
/// descending, then declaration order.
bool candidateBefore(const StyleCandidate& a, const StyleCandidate& b);

struct StyleResolution {
  ObjectId element;
  ViewRule chosen;
  Tier tier = Tier::GlobalDefault;
  std::vector<StyleCandidate> queue;  // sorted, head is `chosen`
  std::vector<RuleTriple> triples;    // rule triples in effect
  std::string originView;             // empty when no view is involved

  bool operator==(const StyleResolution&) const = default;
};

using StyleMap = std::map<ObjectId, StyleResolution, IdLess>;

/// Considers only views with `active` set. Errors: UnknownObject.
StyleResolution resolveStyle(std::string_view element, std::span<const View> views, const Model& model);

/// One resolution per visible element. Elements that fall through to a view
/// default or the global default are unmapped: their origin view (the owner of
/// the chosen default, otherwise the highest-ranked active view) decides via
/// its unmapped policy whether they are dropped, kept, or given the view's
/// default rule triples over the global default presentation.
StyleMap combineViews(std::span<const View> views, const Model& model);

/// True when the view's selectors match `element` (personal, metaclass or default rule).
bool viewSelects(const View& view, std::string_view element, const Model& model);

/// `$##name$` placeholders in template order, duplicates included.
std::vector<std::string> placeholders(std::string_view templ);

/// Substitutes every `$##feature$` with the slot's display string. Unknown
/// features become empty and are reported through `warnings`. Dollar signs in
/// substituted values are emitted as `&#36;` and `#` as `&#35;` so the output
/// holds no placeholders.
std::string renderTemplate(const ViewRule& rule, std::string_view element, const Model& model,
                           std::vector<std::string>* warnings = nullptr);

Measurability interactionCapabilities(const StyleResolution& resolution);

/// Bind-time checks over all views: unique view names and rule ids, unique
/// selectors per view, resolvable selectors and placeholders, measurability
/// invariants, rule triples, and unique stackRank among active views.
std::vector<Issue> checkViews(std::span<const View> views, const Model& model);
/// Throws ValidationError(InvalidView) carrying checkViews() issues.
void validateViews(std::span<const View> views, const Model& model);

}  // namespace posyn
