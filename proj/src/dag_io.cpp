#include "mhf/dag_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mhf {

std::string to_dagv1(const Dag& g) {
  std::ostringstream out;
  write_dagv1(g, out);
  return out.str();
}

Dag parse_dagv1(const std::string& text) {
  std::istringstream in(text);
  return read_dagv1(in);
}

void write_dagv1(const Dag& g, std::ostream& out) {
  const auto edges = g.edges();
  out << "DAGv1 " << g.node_count() << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) out << e.from << ' ' << e.to << '\n';
}

Dag read_dagv1(std::istream& in) {
  std::string magic;
  std::size_t n = 0;
  std::size_t m = 0;
  if (!(in >> magic >> n >> m) || magic != "DAGv1") {
    throw std::runtime_error("DAGv1: malformed header");
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    long long u = 0;
    long long v = 0;
    if (!(in >> u >> v)) {
      throw std::runtime_error("DAGv1: expected " + std::to_string(m) + " edges, got " +
                               std::to_string(k));
    }
    if (u < 1 || v <= u || static_cast<std::size_t>(v) > n) {
      throw std::runtime_error("DAGv1: invalid edge " + std::to_string(u) + " " +
                               std::to_string(v));
    }
    edges.push_back({static_cast<Node>(u), static_cast<Node>(v)});
  }
  std::string trailing;
  if (in >> trailing) throw std::runtime_error("DAGv1: trailing data after edge list");
  return Dag::from_edges(n, std::move(edges));
}

void save_dagv1(const Dag& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dagv1(g, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dag load_dagv1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_dagv1(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace mhf
