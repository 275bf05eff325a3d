#include "spectrack/edgelist.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace spectrack {

namespace {

struct RawEdge {
  long long u = 0;
  long long v = 0;
  long long t = 0;
  std::size_t line = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("ingest_edge_list: line " + std::to_string(line) + ": " + what);
}

bool parse_integer(const std::string& tok, long long& out) {
  std::size_t pos = 0;
  try {
    out = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

}  // namespace

IngestResult ingest_edge_list(std::istream& in) {
  std::vector<RawEdge> raw;
  int columns = 0;  // fixed by the first data line
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty() || toks.front().front() == '#') continue;
    if (columns == 0) {
      if (toks.size() != 2 && toks.size() != 3)
        fail(line_no, "expected 2 or 3 whitespace-separated columns");
      columns = static_cast<int>(toks.size());
    } else if (static_cast<int>(toks.size()) != columns) {
      fail(line_no, "expected " + std::to_string(columns) + " columns like the first data line");
    }
    RawEdge e;
    e.line = line_no;
    if (!parse_integer(toks[0], e.u) || e.u < 0) fail(line_no, "bad node id '" + toks[0] + "'");
    if (!parse_integer(toks[1], e.v) || e.v < 0) fail(line_no, "bad node id '" + toks[1] + "'");
    if (columns == 3 && !parse_integer(toks[2], e.t))
      fail(line_no, "bad timestamp '" + toks[2] + "'");
    raw.push_back(e);
  }
  if (raw.empty()) throw std::runtime_error("ingest_edge_list: no data lines");

  IngestResult out;
  out.timestamped = columns == 3;

  // compact ids in order of first appearance (file order), including nodes
  // that only ever occur on dropped lines
  std::unordered_map<long long, Index> compact;
  for (const RawEdge& e : raw)
    for (const long long id : {e.u, e.v})
      if (compact.emplace(id, static_cast<Index>(compact.size())).second)
        out.original_ids.push_back(id);
  const Index n = static_cast<Index>(compact.size());

  // one kept instance per undirected edge
  std::map<std::pair<Index, Index>, std::size_t> keeper;  // edge -> index into raw
  std::vector<std::size_t> kept_order;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawEdge& e = raw[i];
    if (e.u == e.v) {
      ++out.stats.dropped_self_loops;
      continue;
    }
    const Index a = compact.at(e.u), b = compact.at(e.v);
    const auto key = std::minmax(a, b);
    const auto [it, inserted] = keeper.emplace(key, i);
    if (inserted) {
      kept_order.push_back(i);
    } else {
      ++out.stats.dropped_duplicates;
      if (out.timestamped && e.t < raw[it->second].t) it->second = i;  // earlier stamp wins
    }
  }

  out.stats.nodes = n;
  out.stats.edges = static_cast<Index>(keeper.size());
  if (out.timestamped) {
    out.timed.n = n;
    for (const std::size_t i : kept_order) {
      const RawEdge& e = raw[keeper.at(std::minmax(compact.at(raw[i].u), compact.at(raw[i].v)))];
      out.timed.edges.push_back({compact.at(e.u), compact.at(e.v), e.t});
    }
  } else {
    std::vector<std::pair<Index, Index>> edges;
    edges.reserve(keeper.size());
    for (const std::size_t i : kept_order)
      edges.emplace_back(compact.at(raw[i].u), compact.at(raw[i].v));
    out.graph = SymSparseMatrix::from_edges(n, edges);
  }
  return out;
}

IngestResult ingest_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_edge_list: cannot open '" + path + "'");
  return ingest_edge_list(in);
}

}  // namespace spectrack
