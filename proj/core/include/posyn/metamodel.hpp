#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace posyn {

enum class PrimitiveType { Int, Float, String, Boolean, Enum };

std::string_view toString(PrimitiveType type);
std::optional<PrimitiveType> primitiveTypeFromString(std::string_view text);

struct AttributeDef {
  std::string name;
  PrimitiveType type = PrimitiveType::Int;
  std::string enumName;  // only for PrimitiveType::Enum
  std::optional<double> lower;
  std::optional<double> upper;

  bool operator==(const AttributeDef&) const = default;
};

inline constexpr int kUnbounded = -1;

struct ReferenceDef {
  std::string name;
  std::string target;
  bool containment = false;
  int lower = 0;
  int upper = kUnbounded;

  bool operator==(const ReferenceDef&) const = default;
};

struct MetaClassDef {
  std::string name;
  bool isAbstract = false;
  std::vector<std::string> superclasses;
  std::vector<AttributeDef> attributes;
  std::vector<ReferenceDef> references;

  bool operator==(const MetaClassDef&) const = default;
};

struct EnumDef {
  std::string name;
  std::vector<std::string> literals;

  bool operator==(const EnumDef&) const = default;
};

/// Unvalidated metamodel literal, as authored or read from a project file.
struct MetaModelSpec {
  std::string name;
  std::vector<MetaClassDef> classes;
  std::vector<EnumDef> enums;

  bool operator==(const MetaModelSpec&) const = default;
};

/// A feature of a flattened class: its own plus everything inherited.
struct Feature {
  std::string owner;  // declaring class
  std::variant<AttributeDef, ReferenceDef> def;

  const std::string& name() const;
  bool isReference() const { return std::holds_alternative<ReferenceDef>(def); }
  const AttributeDef& attribute() const { return std::get<AttributeDef>(def); }
  const ReferenceDef& reference() const { return std::get<ReferenceDef>(def); }
};

/// A validated metamodel. Only obtainable through defineMetamodel().
class MetaModel {
 public:
  const std::string& name() const { return spec_.name; }
  const MetaModelSpec& spec() const { return spec_; }

  const MetaClassDef* findClass(std::string_view name) const;
  const EnumDef* findEnum(std::string_view name) const;

  /// Flattened features: inherited ones first (superclass declaration order), then own.
  /// Throws UnknownClass.
  const std::vector<Feature>& features(std::string_view className) const;
  const Feature* findFeature(std::string_view className, std::string_view feature) const;

  /// Length of the shortest superclass path from `className` up to `ancestor`
  /// (0 when equal); nullopt when `className` does not specialize `ancestor`.
  std::optional<int> classDistance(std::string_view className, std::string_view ancestor) const;
  bool conformsTo(std::string_view className, std::string_view ancestor) const {
    return classDistance(className, ancestor).has_value();
  }

  std::vector<std::string> concreteClasses() const;

  bool operator==(const MetaModel& other) const { return spec_ == other.spec_; }

 private:
  friend MetaModel defineMetamodel(MetaModelSpec spec);
  explicit MetaModel(MetaModelSpec spec) : spec_(std::move(spec)) {}

  MetaModelSpec spec_;
  std::map<std::string, std::vector<Feature>, std::less<>> features_;
  std::map<std::string, std::map<std::string, int, std::less<>>, std::less<>> distances_;
};

/// Validates a metamodel literal and computes flattened feature sets.
/// Throws ValidationError carrying every DuplicateName, UnknownSuperclass,
/// UnknownType, InheritanceCycle and BadMultiplicity problem found.
MetaModel defineMetamodel(MetaModelSpec spec);

}  // namespace posyn
