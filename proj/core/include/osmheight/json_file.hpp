// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace osmheight {

/// Parses a whole JSON document. Throws InputError on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Parses a JSON-lines file (blank lines skipped).
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories. Throws Error on
/// failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace osmheight
