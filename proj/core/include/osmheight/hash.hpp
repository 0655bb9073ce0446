// Copyright 2026 The osmheight Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace osmheight {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

/// Lower-case hex SHA-256 of a file's contents. Throws InputError when the
/// file cannot be read.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace osmheight
