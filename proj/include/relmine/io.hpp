#pragma once

#include <string>
#include <vector>

namespace relmine {

// Reads a plain or gzip-compressed (.gz) text file into lines, without
// trailing newlines. Throws std::runtime_error on I/O failure.
std::vector<std::string> read_lines(const std::string &path);

void write_text(const std::string &path, const std::string &content);

}  // namespace relmine
