#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace axs {

// One experiment checkpoint. Serialized as one JSON object per line with
// exactly these keys; absent quantities are explicit nulls.
struct TrajectoryRecord {
  std::uint64_t n = 0;
  std::optional<double> value;
  std::optional<double> bound;
  std::optional<double> oracle;
  std::optional<double> rel_err;
  std::uint64_t mem_words = 0;
  std::optional<std::uint64_t> elapsed_ns;
};

std::string to_json_line(const TrajectoryRecord& rec);
std::string to_json_lines(const std::vector<TrajectoryRecord>& recs);

}  // namespace axs
