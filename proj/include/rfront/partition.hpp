#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rfront {

class CitationGraph;
class UGraph;

/// Front id given to nodes that belong to no front.
inline constexpr int kNoise = 0;

struct FrontInfo {
  int id = 0;
  std::string label;  // "3", or "1B" for sub-fronts
  std::size_t nodes = 0;
  std::size_t internal_edges = 0;
};

/// Node -> front assignment. Front ids are 1..k; kNoise marks unassigned
/// nodes. `fronts` is ordered by id.
struct Partition {
  std::vector<std::string> uids;
  std::vector<int> assignment;  // parallel to uids
  double q = 0.0;
  std::vector<FrontInfo> fronts;

  std::size_t size() const { return uids.size(); }
  const FrontInfo* front(int id) const;
  const FrontInfo* front_by_label(const std::string& label) const;
  std::unordered_map<std::string, int> lookup() const;
  std::size_t noise_count() const;
};

/// Marker for graph nodes that a partition does not mention.
inline constexpr int kUncovered = -1;

/// Front id of every node of `graph` (kUncovered where absent). Throws
/// DataError if the partition names a uid the graph does not have.
std::vector<int> align(const Partition& p, const std::vector<std::string>& graph_uids);

/// Builds a partition over the nodes of `g` from per-node front ids,
/// filling front sizes, internal edge counts and modularity. Labels default
/// to the decimal id.
Partition make_partition(const UGraph& g, std::vector<int> assignment,
                         const std::vector<std::string>& labels = {});

void write_partition_csv(std::ostream& out, const Partition& p);
void write_partition_json(std::ostream& out, const Partition& p);

/// Reads `uid,front_id` rows. Front ids are labels ("noise" for kNoise);
/// metadata is recomputed against `g`.
Partition read_partition_csv(std::istream& in, const UGraph& g);

}  // namespace rfront
