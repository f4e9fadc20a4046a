// Copyright 2026 The FieldLedger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fieldledger/schema.h"

#include <fstream>
#include <set>
#include <sstream>

#include "fieldledger/error.h"
#include "fieldledger/event.h"

namespace fieldledger {
namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& message) {
  throw Error(Errc::kCatalogInvalid, message);
}

std::vector<FieldSpec> parse_fields(const json& list, const std::string& where) {
  if (!list.is_array()) invalid(where + " must be an array");
  std::vector<FieldSpec> fields;
  for (const json& item : list) {
    if (!item.is_object() || !item.contains("name") || !item.contains("type") ||
        !item["name"].is_string() || !item["type"].is_string()) {
      invalid(where + ": field entries need string name and type");
    }
    const auto type = field_type_from_label(item["type"].get<std::string>());
    if (!type) invalid(where + ": unknown field type " + item["type"].dump());
    const auto name = item["name"].get<std::string>();
    if (name.empty()) invalid(where + ": empty field name");
    fields.push_back({name, *type});
  }
  return fields;
}

}  // namespace

std::string_view field_type_label(FieldType type) noexcept {
  switch (type) {
    case FieldType::kString: return "string";
    case FieldType::kInteger: return "integer";
    case FieldType::kNumber: return "number";
    case FieldType::kBoolean: return "boolean";
    case FieldType::kInstant: return "instant";
    case FieldType::kContentRef: return "content_ref";
  }
  return "string";
}

std::optional<FieldType> field_type_from_label(std::string_view label) noexcept {
  for (FieldType t : {FieldType::kString, FieldType::kInteger, FieldType::kNumber,
                      FieldType::kBoolean, FieldType::kInstant, FieldType::kContentRef}) {
    if (field_type_label(t) == label) return t;
  }
  return std::nullopt;
}

const FieldSpec* SchemaDefinition::field(std::string_view name) const {
  for (const auto& f : required_fields) {
    if (f.name == name) return &f;
  }
  for (const auto& f : optional_fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

bool SchemaDefinition::is_required(std::string_view name) const {
  for (const auto& f : required_fields) {
    if (f.name == name) return true;
  }
  return false;
}

std::vector<std::string> SchemaDefinition::content_ref_fields() const {
  std::vector<std::string> out;
  for (const auto* list : {&required_fields, &optional_fields}) {
    for (const auto& f : *list) {
      if (f.type == FieldType::kContentRef) out.push_back(f.name);
    }
  }
  return out;
}

SchemaCatalog SchemaCatalog::from_json(const json& doc) {
  if (!doc.is_object()) invalid("catalog must be an object");
  SchemaCatalog catalog;
  if (!doc.contains("catalog_revision") || !doc["catalog_revision"].is_number_integer() ||
      doc["catalog_revision"].get<int>() < 1) {
    invalid("catalog_revision must be a positive integer");
  }
  catalog.revision_ = doc["catalog_revision"].get<int>();
  if (!doc.contains("schemas") || !doc["schemas"].is_array() || doc["schemas"].empty()) {
    invalid("schemas must be a non-empty array");
  }

  std::set<std::string> seen_kinds;
  for (const json& entry : doc["schemas"]) {
    if (!entry.is_object() || !entry.contains("kind") || !entry["kind"].is_string()) {
      invalid("schema entry needs a string kind");
    }
    SchemaDefinition def;
    def.kind = entry["kind"].get<std::string>();
    if (!kind_from_label(def.kind)) invalid("unknown kind label " + def.kind);
    if (!seen_kinds.insert(def.kind).second) invalid("kind defined twice: " + def.kind);
    if (!entry.contains("version") || !entry["version"].is_number_integer() ||
        entry["version"].get<int>() < 1) {
      invalid(def.kind + ": version must be a positive integer");
    }
    def.version = entry["version"].get<int>();
    def.required_fields = parse_fields(entry.value("required", json::array()), def.kind + ".required");
    def.optional_fields = parse_fields(entry.value("optional", json::array()), def.kind + ".optional");

    std::set<std::string> names;
    for (const auto* list : {&def.required_fields, &def.optional_fields}) {
      for (const auto& f : *list) {
        if (!names.insert(f.name).second) invalid(def.kind + ": duplicate field " + f.name);
      }
    }
    catalog.definitions_.push_back(std::move(def));
  }
  for (EventKind k : kAllEventKinds) {
    if (!seen_kinds.count(std::string(kind_label(k)))) {
      invalid("missing schema for kind " + std::string(kind_label(k)));
    }
  }
  return catalog;
}

SchemaCatalog SchemaCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) invalid(path.string() + " is not valid JSON");
  return from_json(doc);
}

const SchemaCatalog& SchemaCatalog::builtin() {
  static const SchemaCatalog catalog = [] {
    json doc = json::parse(builtin_catalog_text(), nullptr, false);
    if (doc.is_discarded()) invalid("compiled-in catalog is not valid JSON");
    return from_json(doc);
  }();
  return catalog;
}

const SchemaDefinition* SchemaCatalog::find(std::string_view kind) const {
  for (const auto& def : definitions_) {
    if (def.kind == kind) return &def;
  }
  return nullptr;
}

}  // namespace fieldledger
