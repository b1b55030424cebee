#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mhf/dag.hpp"

namespace mhf {

/// DAGv1 text format: a `DAGv1 <N> <M>` header line followed by M lines
/// `u v` (1-indexed, u < v) sorted by (v, u). Writing is canonical, so a
/// read/write round trip reproduces the input bytes.
std::string to_dagv1(const Dag& g);
Dag parse_dagv1(const std::string& text);

void write_dagv1(const Dag& g, std::ostream& out);
Dag read_dagv1(std::istream& in);

void save_dagv1(const Dag& g, const std::filesystem::path& path);
Dag load_dagv1(const std::filesystem::path& path);

}  // namespace mhf
