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

#ifndef FIELDLEDGER_SCHEMA_H_
#define FIELDLEDGER_SCHEMA_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fieldledger {

enum class FieldType { kString, kInteger, kNumber, kBoolean, kInstant, kContentRef };

std::string_view field_type_label(FieldType type) noexcept;
std::optional<FieldType> field_type_from_label(std::string_view label) noexcept;

struct FieldSpec {
  std::string name;
  FieldType type = FieldType::kString;
};

struct SchemaDefinition {
  std::string kind;
  int version = 1;
  std::vector<FieldSpec> required_fields;
  std::vector<FieldSpec> optional_fields;

  const FieldSpec* field(std::string_view name) const;
  bool is_required(std::string_view name) const;
  // Names of content_ref fields, required first, in declaration order.
  std::vector<std::string> content_ref_fields() const;
};

// The set of event schemas in force. Every built-in kind label maps to
// exactly one definition.
class SchemaCatalog {
 public:
  // Meta-validates the catalog document; throws Error(kCatalogInvalid).
  static SchemaCatalog from_json(const nlohmann::json& doc);
  static SchemaCatalog load(const std::filesystem::path& path);

  // The catalog compiled in from config/schema_catalog.json.
  static const SchemaCatalog& builtin();

  const SchemaDefinition* find(std::string_view kind) const;
  const std::vector<SchemaDefinition>& definitions() const { return definitions_; }
  int revision() const { return revision_; }

 private:
  int revision_ = 0;
  std::vector<SchemaDefinition> definitions_;
};

// Raw text of the compiled-in catalog document.
std::string_view builtin_catalog_text();

}  // namespace fieldledger

#endif  // FIELDLEDGER_SCHEMA_H_
