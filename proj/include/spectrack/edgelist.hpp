#pragma once

// Parsing of SNAP-style whitespace edge lists: "u v" per line for static
// graphs, "u v t" for timestamped ones. Raw ids may be arbitrary nonnegative
// integers; they are compacted to dense 0-based ids in order of first
// appearance and the mapping is kept for reporting.

#include <iosfwd>
#include <string>
#include <vector>

#include "spectrack/dynamics.hpp"
#include "spectrack/sparse.hpp"
#include "spectrack/types.hpp"

namespace spectrack {

struct IngestStats {
  Index nodes = 0;
  Index edges = 0;  // undirected edges kept
  Index dropped_self_loops = 0;
  Index dropped_duplicates = 0;
};

struct IngestResult {
  bool timestamped = false;
  SymSparseMatrix graph;      // filled when !timestamped
  TimestampedEdgeList timed;  // filled when timestamped
  IngestStats stats;
  std::vector<long long> original_ids;  // compact id -> raw id
};

// Column count (2 or 3) is fixed by the first data line; '#' lines and blank
// lines are skipped. Duplicate undirected edges keep the first occurrence
// (for timestamped input: the earliest timestamp, ties by file order).
// Malformed lines and files without any data line are reported with line
// numbers.
IngestResult ingest_edge_list(std::istream& in);
IngestResult ingest_edge_list_file(const std::string& path);

}  // namespace spectrack
