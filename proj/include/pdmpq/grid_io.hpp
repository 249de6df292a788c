#pragma once

#include <string>

#include "pdmpq/quantizer.hpp"

namespace pdmpq {

/// Writes the tree as versioned structured text. Floats are serialized as
/// hex-floats (zeros as a bare 0), so a round trip restores every bit.
/// Takes an advisory exclusive lock on the target while writing.
void save_tree(const QuantizationTree& tree, const std::string& path);

/// Reads a tree back. Throws ConfigError on malformed or wrong-version files.
QuantizationTree load_tree(const std::string& path);

std::string tree_to_string(const QuantizationTree& tree);
QuantizationTree tree_from_string(const std::string& text);

}  // namespace pdmpq
