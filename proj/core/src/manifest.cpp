#include "head/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "head/errors.hpp"

namespace head {

namespace {

using Json = nlohmann::ordered_json;

const Json& require(const Json& obj, const char* field, long index) {
  auto it = obj.find(field);
  if (it == obj.end()) throw DataError("missing required field", index, field);
  return *it;
}

template <typename T>
T as(const Json& value, long index, const std::string& field) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError("unexpected type (" + std::string(value.type_name()) + ")", index, field);
  }
}

std::size_t as_index(const Json& value, long index, const std::string& field) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw DataError("expected a non-negative integer", index, field);
  }
  return value.get<std::size_t>();
}

GenerationRecord parse_record(const Json& j, long index) {
  if (!j.is_object()) throw DataError("record must be a JSON object", index);

  GenerationRecord r;
  r.prompt = as<std::string>(require(j, "prompt", index), index, "prompt");
  const auto& seed = require(j, "seed", index);
  if (!seed.is_number_integer()) throw DataError("seed must be an integer", index, "seed");
  r.seed = seed.get<std::int64_t>();
  if (auto it = j.find("generator_id"); it != j.end()) {
    r.generator_id = as<std::string>(*it, index, "generator_id");
  }

  const auto& objects = require(j, "requested_objects", index);
  if (!objects.is_array()) throw DataError("expected an array", index, "requested_objects");
  for (const auto& o : objects) {
    if (!o.is_object()) throw DataError("expected {index, name}", index, "requested_objects");
    r.requested_objects.push_back(
        {as_index(require(o, "index", index), index, "requested_objects.index"),
         as<std::string>(require(o, "name", index), index, "requested_objects.name")});
  }

  const auto& present = require(j, "present_objects", index);
  if (!present.is_array()) throw DataError("expected an array", index, "present_objects");
  for (const auto& p : present) {
    if (!r.present_objects.insert(as_index(p, index, "present_objects")).second) {
      throw DataError("object listed twice", index, "present_objects");
    }
  }

  if (auto it = j.find("centroids"); it != j.end()) {
    if (!it->is_array()) throw DataError("expected an array", index, "centroids");
    for (const auto& c : *it) {
      if (!c.is_object()) throw DataError("expected {object, x, y}", index, "centroids");
      const auto obj = as_index(require(c, "object", index), index, "centroids.object");
      const auto x = as<double>(require(c, "x", index), index, "centroids.x");
      const auto y = as<double>(require(c, "y", index), index, "centroids.y");
      if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
        throw DataError("centroid of object " + std::to_string(obj) + " outside [0, 1]", index,
                        "centroids");
      }
      if (!r.centroids.emplace(obj, Centroid(x, y)).second) {
        throw DataError("object " + std::to_string(obj) + " has two centroids", index,
                        "centroids");
      }
    }
  }

  if (auto it = j.find("per_ct_predictions"); it != j.end()) {
    if (!it->is_object()) throw DataError("expected an object keyed by ct", index, "per_ct_predictions");
    for (const auto& [key, labels] : it->items()) {
      int ct = 0;
      std::size_t used = 0;
      try {
        ct = std::stoi(key, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != key.size() || key.empty()) {
        throw DataError("key '" + key + "' is not an integer timestep", index,
                        "per_ct_predictions");
      }
      if (!labels.is_array()) throw DataError("expected an array of booleans", index, "per_ct_predictions");
      std::vector<bool> values;
      for (const auto& v : labels) {
        if (!v.is_boolean()) throw DataError("expected booleans", index, "per_ct_predictions");
        values.push_back(v.get<bool>());
      }
      if (!r.per_ct_predictions.emplace(ct, std::move(values)).second) {
        throw DataError("timestep " + key + " listed twice", index, "per_ct_predictions");
      }
    }
  }

  if (auto it = j.find("relations"); it != j.end()) {
    if (!it->is_array()) throw DataError("expected an array", index, "relations");
    for (const auto& rel : *it) {
      if (!rel.is_object()) throw DataError("expected {subject, object, kind}", index, "relations");
      RelationSpec spec;
      spec.subject = as_index(require(rel, "subject", index), index, "relations.subject");
      spec.object = as_index(require(rel, "object", index), index, "relations.object");
      const auto kind = as<std::string>(require(rel, "kind", index), index, "relations.kind");
      try {
        spec.kind = parse_relation_kind(kind);
      } catch (const ParameterError& e) {
        throw DataError(e.what(), index, "relations.kind");
      }
      r.relations.push_back(spec);
    }
  }

  r.validate(index);
  return r;
}

std::vector<GenerationRecord> parse_all(const std::vector<Json>& items) {
  std::vector<GenerationRecord> records;
  records.reserve(items.size());
  std::set<std::pair<std::string, std::int64_t>> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto rec = parse_record(items[i], long(i));
    if (!seen.emplace(rec.prompt, rec.seed).second) {
      throw DataError("duplicate (prompt, seed) pair ('" + rec.prompt + "', " +
                          std::to_string(rec.seed) + ")",
                      long(i), "seed");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

Json to_json(const GenerationRecord& r) {
  Json j;
  j["prompt"] = r.prompt;
  j["seed"] = r.seed;
  j["generator_id"] = r.generator_id;
  Json objects = Json::array();
  for (const auto& o : r.requested_objects) objects.push_back({{"index", o.index}, {"name", o.name}});
  j["requested_objects"] = std::move(objects);
  j["present_objects"] = Json::array();
  for (auto p : r.present_objects) j["present_objects"].push_back(p);
  j["centroids"] = Json::array();
  for (const auto& [obj, c] : r.centroids) {
    j["centroids"].push_back({{"object", obj}, {"x", c.x()}, {"y", c.y()}});
  }
  j["per_ct_predictions"] = Json::object();
  for (const auto& [ct, labels] : r.per_ct_predictions) {
    Json arr = Json::array();
    for (bool b : labels) arr.push_back(b);
    j["per_ct_predictions"][std::to_string(ct)] = std::move(arr);
  }
  j["relations"] = Json::array();
  for (const auto& rel : r.relations) {
    j["relations"].push_back(
        {{"subject", rel.subject}, {"object", rel.object}, {"kind", to_string(rel.kind)}});
  }
  return j;
}

}  // namespace

std::vector<GenerationRecord> ingest_manifest(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};

  std::vector<Json> items;
  if (text[first] == '[') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(std::string("manifest is not valid JSON: ") + e.what());
    }
    items.assign(doc.begin(), doc.end());
  } else {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      auto line = text.substr(pos, end - pos);
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
        try {
          items.push_back(Json::parse(line));
        } catch (const nlohmann::json::parse_error& e) {
          throw DataError("line " + std::to_string(line_no) + " is not valid JSON: " + e.what(),
                          long(items.size()));
        }
      }
      pos = end + 1;
    }
  }
  return parse_all(items);
}

std::vector<GenerationRecord> ingest_manifest(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ingest_manifest(buffer.str());
}

std::vector<GenerationRecord> ingest_manifest_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest '" + path.string() + "'");
  return ingest_manifest(in);
}

std::string serialize_manifest(std::span<const GenerationRecord> records) {
  Json doc = Json::array();
  for (const auto& r : records) doc.push_back(to_json(r));
  return doc.dump(2) + "\n";
}

}  // namespace head
