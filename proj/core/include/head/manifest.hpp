#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "head/records.hpp"

namespace head {

/// Reads a manifest: a JSON array of record objects, or JSON Lines with one
/// record object per line. Every record is validated; problems surface as
/// DataError carrying the 0-based record index and field name. Duplicate
/// (prompt, seed) pairs are rejected.
///
/// Record layout (see schemas/manifest.schema.json):
///   {"prompt": "...", "seed": 7, "generator_id": "sd2",
///    "requested_objects": [{"index": 0, "name": "dog"}, ...],
///    "present_objects": [0, 2],
///    "centroids": [{"object": 0, "x": 0.2, "y": 0.5}, ...],
///    "per_ct_predictions": {"25": [true, false, true]},
///    "relations": [{"subject": 0, "object": 1, "kind": "left"}]}
std::vector<GenerationRecord> ingest_manifest(std::string_view text);
std::vector<GenerationRecord> ingest_manifest(std::istream& in);
std::vector<GenerationRecord> ingest_manifest_file(const std::filesystem::path& path);

/// Canonical text form: a JSON array, two-space indent, fixed field order,
/// trailing newline. ingest_manifest(serialize_manifest(r)) == r.
std::string serialize_manifest(std::span<const GenerationRecord> records);

}  // namespace head
